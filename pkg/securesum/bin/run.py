import json
from typing import List, Optional, Tuple

import click

from securesum.bin.common import EXIT_INSECURE, handles_errors


def parse_input(ctx, param, value: Tuple[str, ...]) -> List[List[int]]:
    try:
        return [[int(x) for x in raw.split(",") if x.strip()] for raw in value]
    except ValueError:
        raise click.BadParameter(
            "inputs are comma separated integers, e.g. --input 1,2"
        )


@click.command()
@click.argument(
    "scheme_path", metavar="SCHEME", type=click.Path(exists=True, dir_okay=False)
)
@click.option(
    "-i",
    "--input",
    "inputs",
    multiple=True,
    callback=parse_input,
    help="Input of the next user as comma separated symbols. Repeat once per user.",
)
@click.option(
    "--inputs",
    "inputs_file",
    type=click.Path(exists=True, dir_okay=False),
    help="JSON file with one list of symbols per user.",
)
@click.option("--random", "random_inputs", is_flag=True, help="Draw uniform inputs.")
@click.option(
    "--seed",
    type=int,
    envvar="SECURE_SUM_SEED",
    required=True,
    help="Seed of the keys (and random inputs). Defaults to $SECURE_SUM_SEED.",
)
@click.option(
    "-o",
    "--output",
    type=click.Path(dir_okay=False),
    default="transcript.json",
    show_default=True,
)
@click.option(
    "--redact-keys",
    is_flag=True,
    help="Leave the key realization out of the transcript.",
)
@click.pass_context
@handles_errors
def run(
    ctx,
    scheme_path: str,
    inputs: List[List[int]],
    inputs_file: Optional[str],
    random_inputs: bool,
    seed: int,
    output: str,
    redact_keys: bool,
):
    """
    Execute the protocol once on a scheme file and write the transcript. Inputs
    shorter than the scheme's input length are zero padded.
    """
    from securesum.domain.scheme import Scheme
    from securesum.services.schemes import SCHEME_KIND
    from securesum.services.serde import read_artifact, write_artifact
    from securesum.exceptions import SchemaError
    from securesum.services.simulation import TRANSCRIPT_KIND, run as run_protocol

    sources = sum([bool(inputs), inputs_file is not None, random_inputs])
    if sources != 1:
        raise click.UsageError("give exactly one of --input, --inputs or --random")
    if inputs_file is not None:
        with open(inputs_file) as f:
            try:
                inputs = json.load(f)
            except ValueError as e:
                raise SchemaError(f"{inputs_file} is not valid JSON: {e}")

    scheme = read_artifact(scheme_path, SCHEME_KIND, Scheme)
    transcript = run_protocol(
        scheme, seed, inputs=None if random_inputs else inputs, redact_keys=redact_keys
    )
    path = write_artifact(output, TRANSCRIPT_KIND, transcript)
    click.echo(f"Decoded sum: {transcript.decoded.to_list()}")
    click.echo(f"Transcript written to {click.style(str(path), fg='green')}")
    if not transcript.summary.decoded_ok:
        click.secho("Decoded sum differs from the sum of the inputs", fg="red")
        ctx.exit(EXIT_INSECURE)
