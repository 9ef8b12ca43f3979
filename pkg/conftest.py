"""
Shared pytest configuration.

Boots Django once so management commands and DRF serializers work in
every test module.
"""

import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "meanfield.settings")
os.environ.setdefault("LAB_ENV", "development")
django.setup()
