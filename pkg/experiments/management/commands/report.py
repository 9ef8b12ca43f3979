"""
Re-render a finished run as plain-text tables.

Usage:
    python manage.py report --out runs/verify-1a2b3c4d5e6f
    python manage.py report --out runs/dmin_tail_L4 --compare runs/dmin_tail_L2 --strict

Checks every file against the manifest first; a mismatch exits with code 2.
``--compare`` puts a second dmin-tail run next to the first and checks the
L^-d ratio of their estimates; with ``--strict`` a failed ratio exits with
code 4.
"""

from django.core.management.base import BaseCommand

from core.exceptions import ValidationError
from core.exceptions.handlers import lab_exception_handler
from experiments.repositories import RunRepository
from experiments.services import enforce, format_table, render_report, tail_ratio_checks


def _load_verified(path: str) -> tuple[dict, dict]:
    repository = RunRepository(path)
    manifest = repository.load_manifest()
    mismatched = repository.verify_checksums(manifest)
    if mismatched:
        raise ValidationError(
            f"Files differ from the manifest under {path}: {', '.join(mismatched)}", field="out",
        )
    return manifest, repository.load_report()


class Command(BaseCommand):
    help = "Print the report of a finished run"

    def add_arguments(self, parser):
        parser.add_argument("--out", required=True, help="Run directory written by the run command")
        parser.add_argument("--compare", help="Second dmin-tail run directory, differing only in L")
        parser.add_argument(
            "--strict", action="store_true",
            help="Exit with code 4 when a --compare check fails",
        )

    def handle(self, *args, **options):
        try:
            manifest, report = _load_verified(options["out"])
            if options["compare"]:
                _, reference = _load_verified(options["compare"])
                checks = tail_ratio_checks(report, reference)
        except Exception as exc:
            raise lab_exception_handler(exc) from exc

        self.stdout.write(
            f"Run {manifest['spec_hash'][:12]}  version {manifest['version']}  seed {manifest['seed']}"
            f"  threads {manifest['threads']}  {manifest['wall_clock_seconds']}s  status {manifest['status']}"
        )
        for line in render_report(report, manifest.get("acceptance", [])):
            self.stdout.write(line)

        if options["compare"]:
            self.stdout.write("")
            self.stdout.write(f"Compared with {options['compare']}")
            for line in format_table(
                ("check", "passed", "ratio", "target"),
                [(c.name, c.passed, c.value, c.limit) for c in checks],
            ):
                self.stdout.write(line)
            try:
                enforce(checks, options["strict"])
            except Exception as exc:
                raise lab_exception_handler(exc) from exc
