"""
Validate an experiment spec without running it.

Usage:
    python manage.py validate --spec experiments/specs/verify.json

Prints one line per warning; invalid specs exit with code 2.
"""

from django.core.management.base import BaseCommand, CommandError

from core.exceptions.handlers import lab_exception_handler
from experiments.services import load_spec, spec_diagnostics


class Command(BaseCommand):
    help = "Check an experiment spec and report regime warnings"

    def add_arguments(self, parser):
        parser.add_argument("--spec", required=True, help="Path to the JSON experiment spec")
        parser.add_argument("--seed", type=int, default=None, help="Seed (overrides the spec)")

    def handle(self, *args, **options):
        try:
            spec = load_spec(options["spec"], seed=options["seed"])
        except CommandError:
            raise
        except Exception as exc:
            raise lab_exception_handler(exc) from exc

        warnings = spec_diagnostics(spec)
        for warning in warnings:
            self.stdout.write(self.style.WARNING(f"WARNING: {warning}"))
        if not warnings:
            self.stdout.write(self.style.SUCCESS(f"OK: valid {spec.mode.value} spec (hash {spec.spec_hash()[:12]})"))
