"""
Production Settings

Used for long batch campaigns: quieter logs.
Set LAB_STRICT=true to fail runs on hard checks.
"""

from .base import *

DEBUG = False

for _name in ("dynamics", "experiments"):
    LOGGING["loggers"][_name]["level"] = "INFO"
