"""
Mean-field Lab Settings Package

Loads settings based on LAB_ENV environment variable.
Defaults to 'development' if not set.
"""

import os

env = os.getenv('LAB_ENV', 'development')

if env == 'production':
    from .production import *
else:
    from .development import *
