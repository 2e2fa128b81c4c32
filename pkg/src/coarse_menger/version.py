__version__ = "0.1.0"

#: bumped whenever the JSON report layout changes
REPORT_SCHEMA = 1
