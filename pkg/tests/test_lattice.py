"""Surface lattice data: intersection numbers, SW tables, builders."""

import importlib.resources as ir

import pytest

from verlinde.errors import VerlindeError
from verlinde.lattice import SurfaceLattice, binom2


def data_path(name):
    return str(ir.files("verlinde.data").joinpath(name))


def k3():
    return SurfaceLattice.from_toml(data_path("k3.toml"))


def test_k3_numbers():
    lat = k3()
    assert lat.chiO == 2
    assert lat.K2() == 0
    assert lat.dot((1, 0), (0, 1)) == 1
    assert lat.dot((1, 0), (1, 0)) == 0
    assert lat.chi_line(lat.zero()) == 2
    assert lat.chi_line((1, 1)) == 3
    assert lat.sw_table == [((0, 0), 1)]


def test_vd_formula():
    lat = k3()
    assert lat.vd((0, 0), 2) == 2
    assert lat.vd((0, 0), 3) == 6
    assert lat.vd((1, 1), 2) == 0


def test_sw_class_numerics_enforced():
    # every SW basic class must satisfy a.a = a.K
    with pytest.raises(VerlindeError):
        SurfaceLattice("bad", [[2]], [0], 1, [((1,), 1)])
    SurfaceLattice("ok", [[2]], [1], 1, [((1,), 1)])


def test_gram_validation():
    with pytest.raises(VerlindeError):
        SurfaceLattice("bad", [[0, 1], [2, 0]], [0, 0], 1, [])
    with pytest.raises(VerlindeError):
        SurfaceLattice("bad", [[0, 1]], [0], 1, [])
    with pytest.raises(VerlindeError):
        SurfaceLattice("bad", [[1]], [0, 0], 1, [])


def test_minimal_general_type_table():
    lat = SurfaceLattice.minimal_general_type("gt", [[1]], [1], 2)
    assert sorted(lat.sw_table) == [((0,), 1), ((1,), 1)]
    odd = SurfaceLattice.minimal_general_type("gt5", [[5]], [1], 5)
    assert sorted(odd.sw_table) == [((0,), 1), ((1,), -1)]


def test_blow_up():
    lat = k3().blow_up()
    assert lat.rank == 3
    assert lat.K == (0, 0, 1)
    assert lat.K2() == -1
    assert lat.chiO == 2
    assert lat.dot((0, 0, 1), (0, 0, 1)) == -1
    assert sorted(lat.sw_table) == [((0, 0, 0), 1), ((0, 0, 1), 1)]
    packaged = SurfaceLattice.from_toml(data_path("k3-blowup.toml"))
    assert packaged.gram == lat.gram
    assert packaged.K == lat.K
    assert sorted(packaged.sw_table) == sorted(lat.sw_table)


def test_double_blow_up_sw_count():
    lat = k3().blow_up().blow_up()
    assert len(lat.sw_table) == 4
    assert lat.K2() == -2


def test_disconnected_canonical():
    # two disjoint (-2)-type curves in a rank-2 lattice with K = C1 + C2
    gram = [[-2, 0], [0, -2]]
    curves = [(1, 0), (0, 1)]
    lat = SurfaceLattice.disconnected_canonical(
        "disc", gram, curves, 2, [0, 1]
    )
    assert lat.K == (1, 1)
    table = dict(lat.sw_table)
    assert table[(0, 0)] == 1
    assert table[(1, 0)] == 1
    assert table[(0, 1)] == -1
    assert table[(1, 1)] == -1


def test_disconnected_accumulates_equal_sums():
    # equal curve classes produce multiplicities with signs accumulated;
    # disjointness of equal classes forces self-intersection zero
    gram = [[0]]
    curves = [(1,), (1,)]
    lat = SurfaceLattice.disconnected_canonical("acc", gram, curves, 1, [0, 0])
    table = dict(lat.sw_table)
    assert table[(0,)] == 1
    assert table[(1,)] == 2
    assert table[(2,)] == 1


def test_delta():
    lat = SurfaceLattice("z2", [[0, 1], [1, 0]], [0, 0], 1, [])
    assert lat.delta((2, 4), (0, 0)) == 1
    assert lat.delta((1, 2), (0, 0)) == 0
    assert lat.delta((3, 5), (1, 1)) == 1
    assert lat.delta_r((3, 6), [(0, 0), (0, 0)], 3) == 1
    assert lat.delta_r((3, 5), [(0, 0), (0, 0)], 3) == 0
    assert lat.delta_r((3, 5), [(0, 1), (0, 0)], 3) == 0
    assert lat.delta_r((3, 7), [(1, 1), (0, 0)], 2) == 1


def test_chi_line_rejects_half_integral():
    lat = SurfaceLattice("odd", [[1]], [0], 1, [])
    with pytest.raises(VerlindeError):
        lat.chi_line((1,))
    assert lat.chi_line((2,)) == 3


def test_from_toml_general_type_builder():
    lat = SurfaceLattice.from_toml(data_path("quintic.toml"))
    assert lat.chiO == 5
    assert lat.K2() == 5
    assert sorted(lat.sw_table) == [((0,), 1), ((1,), -1)]
    assert lat.H == (1,)


def test_binom2():
    assert [binom2(n) for n in range(5)] == [0, 1, 3, 6, 10]
