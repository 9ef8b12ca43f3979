"""
experiments: declarative experiment specs, the runner service and the
``run`` / ``validate`` / ``report`` management commands.
"""
