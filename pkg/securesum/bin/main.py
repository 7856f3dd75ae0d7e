import os

import click

from securesum.version import VERSION
from securesum.bin.audit import audit
from securesum.bin.capacity import capacity
from securesum.bin.common import EXIT_USAGE, LOGLEVELS, configure_logging
from securesum.bin.feasibility import feasibility
from securesum.bin.keygen import keygen
from securesum.bin.run import run


class SecureSumGroup(click.Group):
    """
    Usage errors exit with 1, like every other rejected input.
    """

    def make_context(self, *args, **kwargs):
        try:
            return super().make_context(*args, **kwargs)
        except click.UsageError as exc:
            exc.exit_code = EXIT_USAGE
            raise

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as exc:
            exc.exit_code = EXIT_USAGE
            raise


@click.group(cls=SecureSumGroup)
@click.option(
    "--wd",
    type=click.Path(exists=True, file_okay=False, dir_okay=True),
    help="Set the working directory.",
)
@click.option(
    "--loglevel", type=click.Choice(LOGLEVELS), help="Override the log level."
)
@click.version_option(version=VERSION)
@click.pass_context
def main(ctx, wd, loglevel):
    """
    Secure summation over finite fields: capacity, feasibility, key generation,
    protocol runs and security audits.
    """
    if wd is not None:
        os.chdir(wd)
    ctx.obj = {"loglevel": loglevel}
    configure_logging(loglevel or "WARNING")


main.add_command(capacity)
main.add_command(feasibility)
main.add_command(keygen)
main.add_command(run)
main.add_command(audit)


if __name__ == "__main__":
    main()
