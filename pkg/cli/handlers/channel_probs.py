import logging

from cli.arguments import add_output_arguments, add_resource_arguments
from cli.builtins import resolve_resource
from cli.config import RunConfig
from cli.formatters import probability_csv, significant_probabilities
from pauli.channels import channel_entropy, channel_from_resource, entanglement_fidelity
from services.file_service import file_service

logger = logging.getLogger(__name__)

COMMAND = "channel-probs"


def register(subparsers) -> None:
    parser = subparsers.add_parser(COMMAND, help="Pauli probabilities p_k induced by a teleportation medium")
    add_resource_arguments(parser)
    add_output_arguments(parser, archive=False)


async def handle(config: RunConfig) -> int:
    """Таблица p_k с энтропией и точностью запутанности в заголовке"""
    channel = channel_from_resource(resolve_resource(config))
    entropy = channel_entropy(channel)
    fidelity = entanglement_fidelity(channel)
    logger.info("channel n=%d: entropy=%.6f fidelity=%.6f", channel.n, entropy, fidelity)

    if config.format == "csv":
        text = probability_csv(channel.probs, entropy, fidelity)
    else:
        data = file_service.channel_to_dict(channel)
        data["probs"] = dict(significant_probabilities(channel.probs))
        data["entropy"] = entropy
        data["entanglement_fidelity"] = fidelity
        text = file_service.dumps(data)
    file_service.write_text(text, config.out)
    return 0
