import pytest

from packages.core.ann.files import (
    format_dataset,
    load_network,
    parse_dataset,
    read_dataset,
    save_network,
)
from packages.core.ann.network import feed_forward_network, ring_threshold_network
from packages.core.metamodel.errors import FormatError


def test_network_file_round_trip(tmp_path):
    path = tmp_path / "net.json"
    for net in (feed_forward_network([3, 2, 2], seed=9), ring_threshold_network(6, 1, (1, 2, 1), 2)):
        save_network(net, str(path))
        assert load_network(str(path)) == net


def test_invalid_network_file(tmp_path):
    path = tmp_path / "net.json"
    path.write_text('{"activation": "relu"}')
    with pytest.raises(FormatError):
        load_network(str(path))


def test_dataset_parsing(tmp_path):
    text = "# xor\n0 0 | 0\n0 1 | 1\n\n1 0 | 1\n1 1 | 0.0\n"
    samples = parse_dataset(text)
    assert samples[1] == ((0, 1), (1,))
    assert samples[3] == ((1, 1), (0.0,))
    path = tmp_path / "xor.txt"
    path.write_text(format_dataset(samples))
    assert read_dataset(str(path)) == samples


def test_malformed_dataset_lines():
    with pytest.raises(FormatError):
        parse_dataset("0 0 0\n")
    with pytest.raises(FormatError):
        parse_dataset("0 x | 1\n")
