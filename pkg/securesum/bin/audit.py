from typing import Optional

import click

from securesum.bin.common import EXIT_INSECURE, handles_errors, load_config, passed


def _family_of(scheme):
    from securesum.domain.hypergraph import CollusionFamily
    from securesum.domain.scheme import SchemeKind

    params = scheme.params
    if params.kind is SchemeKind.GENERAL and params.collusion is not None:
        return params.collusion
    return CollusionFamily.up_to_size(params.K, params.T)


def _rank_text(rank: Optional[int]) -> str:
    return "-" if rank is None else str(rank)


def render_table(report) -> str:
    from securesum.domain.audit import format_rational
    from securesum.domain.hypergraph import format_users

    mi = {check.T: check for check in report.mi_checks}
    lines = [f"{'T':<16}{'required':>10}{'found':>8}{'MI':>10}  result"]
    for entry in report.per_collusion:
        check = mi.get(entry.T)
        if check is None:
            mi_text = "-"
        elif check.error is not None:
            mi_text = "error"
        elif check.mi_value is not None:
            mi_text = format_rational(check.mi_value)
        else:
            mi_text = f"{check.mi_float:.6g}"
        ok = entry.passed and (check is None or not check.leaks)
        lines.append(
            f"{format_users(entry.T):<16}{_rank_text(entry.required):>10}"
            f"{_rank_text(entry.found):>8}{mi_text:>10}  {passed(ok)}"
        )
        if entry.error is not None:
            lines.append(f"  {click.style(entry.error, fg='red')}")
    if report.rates is not None:
        rates = ", ".join(
            f"{name} = {format_rational(value)}"
            for name, value in report.rates.achieved.items()
        )
        optimal = "yes" if report.rates.is_optimal() else "no"
        lines.append(f"Rates: {rates} (optimal: {optimal})")
    lines.append(f"Zero-sum precoding: {passed(report.zero_sum)}")
    return "\n".join(lines)


@click.command()
@click.argument(
    "scheme_path", metavar="SCHEME", type=click.Path(exists=True, dir_okay=False)
)
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    help="Instance config whose [audit] section supplies the defaults below.",
)
@click.option(
    "--mi/--no-mi",
    default=None,
    help="Run exhaustive mutual information checks. [default: no]",
)
@click.option(
    "--mi-limit",
    type=int,
    help="Largest state count to enumerate. [default: 16777216]",
)
@click.option("--workers", type=int, help="Threads for the per-collusion checks.")
@click.option(
    "-o",
    "--output",
    type=click.Path(dir_okay=False),
    default="audit.json",
    show_default=True,
)
@click.pass_context
@handles_errors
def audit(
    ctx,
    scheme_path: str,
    config_path: Optional[str],
    mi: Optional[bool],
    mi_limit: Optional[int],
    workers: Optional[int],
    output: str,
):
    """
    Check rank certificates (and optionally exact mutual information) of a scheme
    file for every colluding set it was built for. Exits 2 unless everything passes.
    """
    from securesum.domain.config import AuditConfig
    from securesum.domain.scheme import Scheme
    from securesum.exceptions import StateSpaceTooLargeError
    from securesum.services.audit import AUDIT_REPORT_KIND, audit_scheme, state_space
    from securesum.services.schemes import SCHEME_KIND
    from securesum.services.serde import read_artifact, write_artifact

    settings = load_config(config_path).audit if config_path else AuditConfig()
    if mi is None:
        mi = settings.with_mi
    if mi_limit is None:
        mi_limit = settings.mi_limit
    if workers is None:
        workers = settings.workers

    scheme = read_artifact(scheme_path, SCHEME_KIND, Scheme)
    if mi:
        states = state_space(scheme)
        if states > mi_limit:
            raise StateSpaceTooLargeError(states, mi_limit)
    report = audit_scheme(
        scheme, _family_of(scheme), mi_limit=mi_limit, with_mi=mi, workers=workers
    )
    write_artifact(output, AUDIT_REPORT_KIND, report)
    click.echo(render_table(report))
    if not report.secure:
        ctx.exit(EXIT_INSECURE)
