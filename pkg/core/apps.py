from django.apps import AppConfig


class CoreConfig(AppConfig):
    """Checks the LAB_* configuration once Django has loaded the apps."""

    name = "core"
    verbose_name = "Lab core"

    def ready(self):
        from core.config import validate_config_on_startup
        validate_config_on_startup()
