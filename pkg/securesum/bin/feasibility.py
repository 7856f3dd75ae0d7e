import click

from securesum.bin.common import EXIT_INSECURE, handles_errors, requires_config


@click.command()
@click.argument(
    "config_path", metavar="CONFIG", type=click.Path(exists=True, dir_okay=False)
)
@click.pass_context
@handles_errors
@requires_config
def feasibility(config, ctx):
    """
    Decide whether the configured key hypergraph allows secure summation against every
    configured colluding set, and print a witness partition when it does not.

    CONFIG is a TOML or JSON instance file. A bare JSON hypergraph
    {"K": 4, "edges": [[1,2,4],[2,3],[3,4]], "collusion": [[4]]} is accepted too.
    Symmetric instances are checked on their complete G-uniform pattern against every
    colluding set of at most T users.
    """
    from securesum.domain.hypergraph import CollusionFamily
    from securesum.exceptions import SchemaError
    from securesum.services.config import hypergraph_from_instance
    from securesum.services.hypergraph import feasibility as check, symmetric_pattern

    instance = config.instance
    if instance.kind == "general":
        graph, family = hypergraph_from_instance(instance)
    elif instance.kind == "symmetric":
        if instance.K is None or instance.G is None:
            raise SchemaError("a symmetric instance needs 'K' and 'G'")
        graph = symmetric_pattern(instance.K, instance.G)
        family = CollusionFamily.up_to_size(instance.K, instance.T)
    else:
        raise SchemaError("arbitrarily coded keys have no key hypergraph")

    verdict = check(graph, family)
    if not verdict.feasible:
        click.secho(verdict.describe(), fg="red")
        ctx.exit(EXIT_INSECURE)
    click.secho(verdict.describe(), fg="green")
