"""
Plain-text tables for the ``report`` command.
"""

from typing import Any, Iterable, Sequence


def _cell(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def format_table(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> list[str]:
    """Left-aligned columns separated by two spaces."""
    cells = [[_cell(v) for v in row] for row in rows]
    widths = [len(h) for h in header]
    for row in cells:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells)
    return lines


def _mc_lines(report: dict) -> list[str]:
    rows = []
    for point in report["points"]:
        est = point.get("estimate") or {}
        rows.append((
            point["n"], est.get("estimate"), est.get("lower"), est.get("upper"),
            point.get("median_statistic"), point.get("scaled_median"), point.get("bound"),
        ))
    lines = [f"Estimator: {report['estimator']} ({report['replicas']} replicas, seed {report['seed']})"]
    lines += format_table(("N", "estimate", "lower", "upper", "median", "scaled", "bound"), rows)
    for point in report["points"]:
        breakdown = point.get("breakdown")
        if breakdown:
            lines.append(f"N={point['n']} breakdown: " + ", ".join(
                f"{name} {_cell(value['estimate'])}" for name, value in breakdown.items()
            ))
    for name, fit in report.get("fits", {}).items():
        lines.append(f"Fit {name}: {_cell(fit.get('value'))} (stderr {_cell(fit.get('stderr'))})")
    if report.get("bound_constant") is not None:
        lines.append(f"Bound constant (fitted at smallest N): {_cell(report['bound_constant'])}")
    return lines


def _verify_lines(run: dict) -> list[str]:
    assumptions = run["assumptions"]
    rows = [("delta", assumptions["delta_ok"], assumptions["delta_n"], assumptions["d_min1"])]
    for name in ("conv", "wp", "strong1", "strong2", "absorbable"):
        cond = assumptions[f"cond_{name}"]
        rows.append((name, cond["passed"], cond["value"], cond["limit"]))
    conclusions = run["conclusions"]
    lines = [f"N={run['n']}  delta_N={_cell(run['delta_n'])}  W_p(0)={_cell(assumptions['w_p0'])}"]
    lines += format_table(("condition", "passed", "value", "limit"), rows)
    lines.append(
        f"fitted C_dist={_cell(conclusions['fitted_c_dist'])}  C={_cell(conclusions['fitted_c_wp'])}"
        f"  K={_cell(conclusions['prefactor_envelope'])}  sup margin={_cell(conclusions['sup_margin'])}"
    )
    bootstrap = run["bootstrap"]
    lines.append(
        f"bootstrap: L1={_cell(run['l1'])}  implied L2={_cell(bootstrap['implied_l2'])}"
        f"  flagged samples={sum(bootstrap['flags'])}  pair flags={sum(bootstrap['pair_flags'])}"
    )
    return lines


def render_report(report: dict, acceptance: Sequence[dict] = ()) -> list[str]:
    """Human-readable lines for a run's report.json and acceptance checks."""
    mode = report.get("mode", "?")
    lines = [f"Mode: {mode}"]
    if mode == "simulate":
        summary = report["trajectory"]
        lines += format_table(("key", "value"), sorted(summary.items()))
    elif mode == "verify":
        lines += _verify_lines(report)
    elif mode == "convergence-study":
        table = report["table"]
        header = ("n", "w0", "sup_w", "w_floor", "fitted_c_dist", "fitted_c_wp", "sup_margin")
        lines += format_table(header, [[row[key] for key in header] for row in table])
        for run in report["runs"]:
            lines.append("")
            lines += _verify_lines(run)
    else:
        lines += _mc_lines(report)

    for warning in report.get("warnings", []):
        lines.append(f"WARNING: {warning}")
    if acceptance:
        lines.append("")
        lines += format_table(
            ("check", "hard", "passed", "value", "limit"),
            [(c["name"], c["hard"], c["passed"], c.get("value"), c.get("limit")) for c in acceptance],
        )
    return lines
