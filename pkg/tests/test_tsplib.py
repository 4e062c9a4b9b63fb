import math

import numpy as np
import pytest

from qacotsp.tsplib import (
    DimensionMismatch,
    IndexOutOfRange,
    Instance,
    InvalidCount,
    InvalidTour,
    MalformedHeader,
    MetricMode,
    NonNumericCoordinate,
    Tour,
    UnsupportedEdgeWeightType,
    distance,
    distance_matrix,
    format_instance,
    gen_random_instance,
    load_instance,
    parse_instance,
    tour_length,
    validate_tour,
)

MINIMAL_3 = """NAME : tri
TYPE : TSP
DIMENSION : 3
EDGE_WEIGHT_TYPE : EUC_2D
NODE_COORD_SECTION
1 0 0
2 3 0
3 0 4
EOF
"""


def make_square():
    return Instance("square", 4, "EUC_2D",
                    np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]))


def test_parse_minimal():
    inst = parse_instance(MINIMAL_3)
    assert inst.dimension == 3
    assert inst.name == "tri"
    assert inst.edge_weight_type == "EUC_2D"
    assert inst.coords[1].tolist() == [3.0, 0.0]


def test_parse_dimension_mismatch():
    text = MINIMAL_3.replace("DIMENSION : 3", "DIMENSION : 5")
    with pytest.raises(DimensionMismatch):
        parse_instance(text)


def test_parse_unsupported_type():
    text = MINIMAL_3.replace("EUC_2D", "EXPLICIT")
    with pytest.raises(UnsupportedEdgeWeightType):
        parse_instance(text)


def test_parse_non_numeric():
    text = MINIMAL_3.replace("2 3 0", "2 x 0")
    with pytest.raises(NonNumericCoordinate):
        parse_instance(text)


def test_parse_missing_header():
    with pytest.raises(MalformedHeader):
        parse_instance("DIMENSION : 3\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n3 2 2\n")
    with pytest.raises(MalformedHeader):
        parse_instance("EDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n")


def test_parse_berlin52(data_dir):
    raw = (data_dir / "berlin52.tsp").read_text()
    coord_lines = [ln for ln in raw.splitlines()
                   if ln and ln[0].isdigit()]
    assert len(coord_lines) == 52
    inst = parse_instance(raw)
    assert inst.dimension == 52
    assert inst.edge_weight_type == "EUC_2D"
    # spot checks against the raw file
    assert inst.coords[0].tolist() == [565.0, 575.0]
    assert inst.coords[51].tolist() == [1740.0, 245.0]


def test_distance_plain_345():
    inst = parse_instance(MINIMAL_3)
    assert distance(inst, 1, 2, MetricMode.PLAIN) == pytest.approx(5.0)
    assert distance(inst, 1, 2, MetricMode.CANONICAL) == 5


def test_distance_symmetry_and_zero():
    rng = np.random.default_rng(3)
    inst = gen_random_instance(12, 5, 100.0)
    for mode in MetricMode:
        D = distance_matrix(inst, mode)
        assert np.allclose(D, D.T)
        assert np.all(np.diag(D) == 0.0)
        for _ in range(20):
            i, j = rng.integers(12, size=2)
            assert distance(inst, int(i), int(j), mode) == pytest.approx(D[i, j])


def test_distance_index_out_of_range():
    inst = parse_instance(MINIMAL_3)
    with pytest.raises(IndexOutOfRange):
        distance(inst, 0, 3, MetricMode.PLAIN)


def geo_reference(c1, c2):
    """Independent transcription of the TSPLIB GEO formula."""
    PI = 3.141592
    RRR = 6378.388

    def rad(value):
        deg = int(value)  # C-style truncation
        minutes = value - deg
        return PI * (deg + 5.0 * minutes / 3.0) / 180.0

    lat1, lon1 = rad(c1[0]), rad(c1[1])
    lat2, lon2 = rad(c2[0]), rad(c2[1])
    q1 = math.cos(lon1 - lon2)
    q2 = math.cos(lat1 - lat2)
    q3 = math.cos(lat1 + lat2)
    return int(RRR * math.acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)) + 1.0)


def test_distance_geo_matches_reference(data_dir):
    inst = load_instance(data_dir / "ulysses16.tsp")
    D = distance_matrix(inst, MetricMode.CANONICAL)
    for i in range(inst.dimension):
        for j in range(inst.dimension):
            if i == j:
                continue
            expected = geo_reference(inst.coords[i], inst.coords[j])
            assert D[i, j] == expected
            assert distance(inst, i, j, MetricMode.CANONICAL) == expected


def test_tour_length_square():
    inst = make_square()
    assert tour_length(inst, Tour((0, 1, 2, 3)), MetricMode.PLAIN) == pytest.approx(4.0)
    crossing = tour_length(inst, Tour((0, 2, 1, 3)), MetricMode.PLAIN)
    assert crossing == pytest.approx(2.0 + 2.0 * math.sqrt(2.0))


def test_tour_length_two_cities():
    inst = Instance("pair", 2, "EUC_2D", np.array([[0.0, 0.0], [7.0, 0.0]]))
    assert tour_length(inst, Tour((0, 1)), MetricMode.PLAIN) == pytest.approx(14.0)
    assert tour_length(inst, Tour((1, 0)), MetricMode.PLAIN) == pytest.approx(14.0)


def test_tour_length_rotation_reversal_invariant():
    rng = np.random.default_rng(11)
    inst = gen_random_instance(9, 23, 50.0)
    base = list(rng.permutation(9))
    ref = tour_length(inst, Tour(tuple(base)), MetricMode.PLAIN)
    for shift in range(9):
        rotated = base[shift:] + base[:shift]
        assert tour_length(inst, Tour(tuple(rotated)), MetricMode.PLAIN) == pytest.approx(ref)
    assert tour_length(inst, Tour(tuple(reversed(base))), MetricMode.PLAIN) == pytest.approx(ref)


def test_validate_tour():
    assert validate_tour([0, 1, 2, 3], 4)
    assert not validate_tour([0, 0, 1, 2], 4)
    assert not validate_tour([0, 1, 2], 4)
    assert not validate_tour([0, 1, 2, 4], 4)


def test_tour_constructor_rejects_invalid():
    with pytest.raises(InvalidTour):
        Tour((0, 0, 1))
    with pytest.raises(InvalidTour):
        Tour((1, 2, 3))


def test_gen_random_deterministic():
    a = gen_random_instance(64, 42, 1000.0)
    b = gen_random_instance(64, 42, 1000.0)
    assert a.dimension == 64
    assert np.array_equal(a.coords, b.coords)
    c = gen_random_instance(64, 43, 1000.0)
    assert not np.array_equal(a.coords, c.coords)
    assert np.all(a.coords >= 0.0) and np.all(a.coords <= 1000.0)


def test_gen_random_bounds():
    inst = gen_random_instance(2, 0, 1.0)
    assert inst.dimension == 2
    with pytest.raises(InvalidCount):
        gen_random_instance(1, 0, 1.0)
    with pytest.raises(InvalidCount):
        gen_random_instance(5, 0, 0.0)


def test_format_parse_roundtrip():
    inst = gen_random_instance(10, 7, 500.0)
    again = parse_instance(format_instance(inst))
    assert again.name == inst.name
    assert again.dimension == inst.dimension
    assert again.edge_weight_type == inst.edge_weight_type
    assert np.allclose(again.coords, inst.coords, rtol=0, atol=1e-9)
