from typing import Optional

import click

from securesum.bin.common import EXIT_INSECURE, handles_errors


@click.command()
@click.option("--K", "K", type=int, required=True, help="Number of users.")
@click.option(
    "--T", "T", type=int, default=0, show_default=True, help="Colluding set size."
)
@click.option(
    "--G",
    "G",
    type=int,
    help="Group size of symmetric groupwise keys. Omit for coded keys.",
)
@click.pass_context
@handles_errors
def capacity(ctx, K: int, T: int, G: Optional[int]):
    """
    Print the optimal rate region.
    """
    from securesum.services.capacity import capacity_coded, capacity_groupwise

    region = capacity_coded(K, T) if G is None else capacity_groupwise(K, T, G)
    if not region.feasible:
        click.secho(region.describe(), fg="red")
        ctx.exit(EXIT_INSECURE)
    click.echo(region.describe())
