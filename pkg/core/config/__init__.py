from .validators import output_dir_issues, validate_config_on_startup

__all__ = ["output_dir_issues", "validate_config_on_startup"]
