from typing import Optional

import click

from securesum.bin.common import handles_errors, passed, requires_config


@click.command()
@click.argument(
    "config_path", metavar="CONFIG", type=click.Path(exists=True, dir_okay=False)
)
@click.option(
    "--fixture",
    type=click.Path(exists=True, dir_okay=False),
    help="JSON file with fixed symmetric precoding matrices, checked once.",
)
@click.option("--seed", type=int, help="Override the configured seed.")
@click.option(
    "-o", "--output", type=click.Path(dir_okay=False), help="Scheme file to write."
)
@handles_errors
@requires_config
def keygen(config, fixture: Optional[str], seed: Optional[int], output: Optional[str]):
    """
    Generate a secure summation scheme from an instance config and write it as JSON.
    """
    from securesum.exceptions import MissingSeedError
    from securesum.services.random_stream import RandomStream
    from securesum.services.schemes import SCHEME_KIND, SchemeBuilder
    from securesum.services.serde import read_precoding_fixture, write_artifact

    instance = config.instance
    if seed is not None:
        instance.seed = seed
    fixture_path = fixture or instance.fixture_path
    precoding = None
    if fixture_path is not None:
        precoding = read_precoding_fixture(fixture_path)

    builder = SchemeBuilder.by_name(instance.kind)()
    if builder.randomized and instance.seed is None and precoding is None:
        raise MissingSeedError()
    stream = RandomStream(instance.seed) if instance.seed is not None else None
    scheme = builder.build(
        instance, stream, fixture=precoding, workers=config.audit.workers
    )

    path = write_artifact(
        output or config.project.output_path / "scheme.json", SCHEME_KIND, scheme
    )
    params = scheme.params
    click.echo(
        f"{params.kind.value} scheme for K={params.K} over F_{params.spec.q}: "
        f"L={params.L}, written to {click.style(str(path), fg='green')}"
    )
    if scheme.certificate is not None:
        failures = len(scheme.certificate.failures())
        click.echo(
            f"Rank certificates: {passed(scheme.certificate.all_pass)} "
            f"({len(scheme.certificate.per_collusion) - failures}"
            f"/{len(scheme.certificate.per_collusion)})"
        )
