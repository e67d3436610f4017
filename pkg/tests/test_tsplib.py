import math

import numpy as np
import pytest

from mpdtsp.tsplib import (
    MetricMode,
    PointCloud,
    TsplibParseError,
    dumps,
    parse,
    tsplib_distance,
)

MINIMAL = """\
NAME: tiny
TYPE: TSP
DIMENSION: 3
EDGE_WEIGHT_TYPE: EUC_2D
NODE_COORD_SECTION
1 0 0
2 3 4
3 10 0
EOF
"""


def test_parse_minimal_file():
    cloud = parse(MINIMAL)
    assert cloud.name == "tiny"
    assert cloud.declared_dimension == 3
    assert cloud.points == ((1, 0.0, 0.0), (2, 3.0, 4.0), (3, 10.0, 0.0))


def test_parse_eil51(eil51_cloud):
    assert eil51_cloud.declared_dimension == 51
    assert len(eil51_cloud) == 51
    assert eil51_cloud.points[0] == (1, 37.0, 52.0)
    assert eil51_cloud.points[-1] == (51, 30.0, 40.0)


def test_key_order_and_whitespace_flexible():
    text = (
        "DIMENSION :  2\n"
        "EDGE_WEIGHT_TYPE\tEUC_2D\n"
        "NAME  loose\n\n"
        "NODE_COORD_SECTION\n"
        "  1   1.5   2.5\n"
        "  2   0     0\n"
    )
    cloud = parse(text)
    assert cloud.name == "loose"
    assert cloud.points[0] == (1, 1.5, 2.5)


def test_eof_token_optional():
    assert len(parse(MINIMAL.replace("EOF\n", ""))) == 3


def test_dimension_mismatch_fewer_rows():
    broken = MINIMAL.replace("DIMENSION: 3", "DIMENSION: 5").replace("EOF\n", "")
    with pytest.raises(TsplibParseError, match="NODE_COORD_SECTION ended after 3 of 5"):
        parse(broken)


def test_dimension_mismatch_extra_rows():
    broken = MINIMAL.replace("DIMENSION: 3", "DIMENSION: 2")
    with pytest.raises(TsplibParseError, match="more rows than DIMENSION"):
        parse(broken)


def test_missing_coord_section():
    with pytest.raises(TsplibParseError, match="NODE_COORD_SECTION"):
        parse("NAME: x\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D\nEOF\n")


@pytest.mark.parametrize("ewt", ["EXPLICIT", "GEO", "ATT", "CEIL_2D"])
def test_unsupported_edge_weight_types(ewt):
    with pytest.raises(TsplibParseError, match=f"EDGE_WEIGHT_TYPE {ewt}"):
        parse(MINIMAL.replace("EUC_2D", ewt))


def test_unsupported_sections_named_with_line():
    text = "DIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D\nEDGE_WEIGHT_SECTION\n1 2\n"
    with pytest.raises(TsplibParseError, match="line 3: unsupported section EDGE_WEIGHT_SECTION"):
        parse(text)


def test_nonconsecutive_indices_preserved():
    text = MINIMAL.replace("1 0 0", "7 0 0").replace("2 3 4", "9 3 4").replace("3 10 0", "4 10 0")
    assert parse(text).indices() == [7, 9, 4]


def test_serialize_back_round_trip():
    cloud = parse(MINIMAL)
    again = parse(dumps(cloud))
    assert again.points == cloud.points
    assert again.name == cloud.name
    # a second round trip is byte-identical
    assert dumps(again) == dumps(cloud)


def test_round_trip_preserves_fractional_coords():
    cloud = PointCloud("frac", ((1, 0.125, 2.0), (2, 1e-3, 7.25)), 2)
    assert parse(dumps(cloud)).points == cloud.points


class TestDistance:
    def test_identity(self):
        for mode in (MetricMode.EXACT, MetricMode.ROUNDED):
            assert tsplib_distance((0, 0), (0, 0), mode) == 0.0

    def test_pythagorean_triple(self):
        for mode in (MetricMode.EXACT, MetricMode.ROUNDED):
            assert tsplib_distance((0, 0), (3, 4), mode) == 5.0

    def test_unit_diagonal(self):
        assert tsplib_distance((0, 0), (1, 1)) == math.sqrt(2)
        assert tsplib_distance((0, 0), (1, 1), MetricMode.ROUNDED) == 1.0

    def test_halves_round_up(self):
        assert tsplib_distance((0, 0), (0.5, 0), MetricMode.ROUNDED) == 1.0
        assert tsplib_distance((0, 0), (1.5, 0), MetricMode.ROUNDED) == 2.0

    def test_explicit_mode_has_no_coordinate_distance(self):
        with pytest.raises(ValueError):
            tsplib_distance((0, 0), (1, 1), MetricMode.EXPLICIT)

    def test_symmetry_and_triangle_inequality(self):
        rng = np.random.RandomState(42)
        for _ in range(200):
            a, b, c = [tuple(rng.uniform(-50, 50, 2)) for _ in range(3)]
            assert tsplib_distance(a, b) == tsplib_distance(b, a)
            assert tsplib_distance(a, c) <= (
                tsplib_distance(a, b) + tsplib_distance(b, c) + 1e-12
            )
