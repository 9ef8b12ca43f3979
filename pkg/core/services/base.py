"""
Base Service
=============

Foundation for all service classes. Provides a standardised logger
and run-ID generation.
"""

import logging
import uuid


class BaseService:
    """
    All service classes inherit from this.

    Subclass example::

        class ExperimentRunner(BaseService):
            def run(self, spec):
                self.logger.info("running %s", spec.mode)

    Features:
        - ``cls.logger``: pre-configured logger using the subclass module name
        - ``cls.generate_run_id()``: opaque ID for log correlation
    """

    logger: logging.Logger = logging.getLogger(__name__)

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        # Each subclass gets its own logger named after its module
        cls.logger = logging.getLogger(cls.__module__)

    @staticmethod
    def generate_run_id() -> str:
        """Generate a short opaque run ID for log correlation."""
        return uuid.uuid4().hex[:12]

