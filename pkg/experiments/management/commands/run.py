"""
Run an experiment spec.

Usage:
    python manage.py run --spec experiments/specs/two_body.json
    python manage.py run --spec study.json --threads 8 --out runs/study --strict
    python manage.py run --spec study.json --seed 11      # overrides the spec's seed

Exit codes: 0 success, 2 invalid spec, 3 numerical abort,
4 failed hard acceptance check under --strict.
"""

from django.core.management.base import BaseCommand, CommandError

from core.exceptions.handlers import lab_exception_handler
from experiments.services import ExperimentRunner, load_spec, spec_diagnostics


class Command(BaseCommand):
    help = "Execute an experiment spec and write reports, CSVs and a manifest"

    def add_arguments(self, parser):
        parser.add_argument("--spec", required=True, help="Path to the JSON experiment spec")
        parser.add_argument(
            "--threads", type=int, default=None,
            help="Worker threads (default: LAB_THREADS or the logical CPU count)",
        )
        parser.add_argument(
            "--strict", action="store_true",
            help="Exit with code 4 when a hard acceptance check fails",
        )
        parser.add_argument("--out", default=None, help="Output directory (overrides the spec)")
        parser.add_argument("--seed", type=int, default=None, help="Seed (overrides the spec)")

    def handle(self, *args, **options):
        if options["threads"] is not None and options["threads"] < 1:
            raise CommandError("--threads must be >= 1", returncode=2)
        try:
            spec = load_spec(options["spec"], seed=options["seed"])
            for warning in spec_diagnostics(spec):
                self.stderr.write(self.style.WARNING(f"WARNING: {warning}"))
            runner = ExperimentRunner(
                spec,
                output_dir=options["out"],
                workers=options["threads"],
                strict=options["strict"] or None,
            )
            result = runner.run()
        except CommandError:
            raise
        except Exception as exc:
            raise lab_exception_handler(exc) from exc

        for check in result.failed:
            kind = "hard" if check.hard else "soft"
            self.stderr.write(self.style.WARNING(f"Acceptance ({kind}) failed: {check.name} {check.detail}".rstrip()))
        self.stdout.write(self.style.SUCCESS(
            f"{spec.mode.value} run complete: {len(result.manifest.files)} files in {result.output_dir}"
        ))
