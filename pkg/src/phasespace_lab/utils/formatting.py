"""Plain-text rendering of run results for the terminal."""

from phasespace_lab.models.scenario import RunResult
from phasespace_lab.utils.constants import SCENARIO_DESCRIPTIONS


def format_scenarios() -> str:
    width = max(len(s.value) for s in SCENARIO_DESCRIPTIONS)
    return "\n".join(f"{s.value:<{width}}  {text}" for s, text in SCENARIO_DESCRIPTIONS.items())


def format_run_result(result: RunResult) -> str:
    """Result table followed by the named checks."""
    lines = [f"{result.scenario.value}  ({'PASS' if result.passed else 'FAIL'}, {result.wall_time:.2f}s)", ""]
    lines.append(f"{'param':>12} {'measured':>16} {'predicted':>16} {'defect':>11}")
    for row in result.sorted_rows():
        lines.append(f"{row.param:>12.6g} {row.measured:>16.10g} {row.predicted:>16.10g} {row.defect:>11.3e}")

    if result.checks:
        lines.append("")
        for name, ok in sorted(result.checks.items()):
            lines.append(f"  [{'ok' if ok else 'FAILED'}] {name}")

    if result.extras:
        lines.append("")
        for key, value in sorted(result.extras.items()):
            lines.append(f"  {key}: {value}")
    return "\n".join(lines)


def format_violations(violations: list[str]) -> str:
    if not violations:
        return "config OK"
    return "\n".join(f"- {v}" for v in violations)
