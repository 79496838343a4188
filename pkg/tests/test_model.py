import numpy as np
import pytest

import flathist as fh
from flathist.model import LadderDiscovery

from conftest import naive_bonds, naive_ising_energy, naive_potts_energy


class TestModelSpec:
    def test_ising_forces_q2(self):
        assert fh.ModelSpec(fh.ModelKind.ISING, 4).q == 2

    def test_potts_defaults_q10(self):
        assert fh.ModelSpec(fh.ModelKind.POTTS, 2).q == 10

    @pytest.mark.parametrize("L", [1, 3, 5, 7, 0, -2])
    def test_rejects_odd_or_small_L(self, L):
        with pytest.raises(ValueError, match="even"):
            fh.ModelSpec(fh.ModelKind.ISING, L)

    def test_rejects_bad_q(self):
        with pytest.raises(ValueError):
            fh.ModelSpec(fh.ModelKind.ISING, 4, q=3)
        with pytest.raises(ValueError):
            fh.ModelSpec(fh.ModelKind.POTTS, 4, q=2)


class TestTotalEnergy:
    def test_all_up_ising_l2(self, ising2):
        lat = fh.SpinLattice.uniform(ising2, 0)
        assert fh.total_energy(lat) == -8

    def test_one_flip_ising_l2(self, ising2):
        lat = fh.SpinLattice.uniform(ising2, 0)
        lat.set_site(0, 1)
        assert fh.total_energy(lat) == 0
        assert lat.cached_energy == 0

    def test_all_equal_potts_l2(self, potts2):
        lat = fh.SpinLattice.uniform(potts2, 3)
        assert fh.total_energy(lat) == -8

    @pytest.mark.parametrize("kind,L,q", [
        (fh.ModelKind.ISING, 2, 2), (fh.ModelKind.ISING, 4, 2),
        (fh.ModelKind.POTTS, 2, 10), (fh.ModelKind.POTTS, 4, 5),
    ])
    def test_matches_naive_bond_sum(self, kind, L, q):
        spec = fh.ModelSpec(kind, L, q)
        rng = np.random.default_rng(11)
        bonds = naive_bonds(L)
        for _ in range(20):
            lat = fh.SpinLattice.random(spec, rng)
            cfg = lat.sites.tolist()
            if kind is fh.ModelKind.ISING:
                expected = naive_ising_energy(cfg, bonds)
            else:
                expected = naive_potts_energy(cfg, bonds)
            assert fh.total_energy(lat) == expected
            assert lat.cached_energy == expected

    def test_global_flip_invariance_ising(self, ising4):
        rng = np.random.default_rng(5)
        for _ in range(10):
            lat = fh.SpinLattice.random(ising4, rng)
            flipped = fh.SpinLattice(ising4, 1 - lat.sites)
            assert fh.total_energy(lat) == fh.total_energy(flipped)

    def test_color_permutation_invariance_potts(self, potts2):
        rng = np.random.default_rng(6)
        for _ in range(10):
            lat = fh.SpinLattice.random(potts2, rng)
            perm = rng.permutation(potts2.q).astype(np.int8)
            permuted = fh.SpinLattice(potts2, perm[lat.sites])
            assert fh.total_energy(lat) == fh.total_energy(permuted)


class TestDeltaEnergy:
    def test_flip_back_is_inverse(self, ising2):
        lat = fh.SpinLattice.uniform(ising2, 0)
        lat.set_site(0, 1)
        assert fh.delta_energy(lat, 0, 0) == -8

    def test_identity_move_is_zero(self, ising4, potts2):
        rng = np.random.default_rng(7)
        for spec in (ising4, potts2):
            lat = fh.SpinLattice.random(spec, rng)
            for site in range(spec.n_sites):
                assert fh.delta_energy(lat, site, int(lat.sites[site])) == 0

    @pytest.mark.parametrize("kind,L,q", [
        (fh.ModelKind.ISING, 2, 2), (fh.ModelKind.ISING, 4, 2),
        (fh.ModelKind.POTTS, 2, 10), (fh.ModelKind.POTTS, 4, 4),
    ])
    def test_exhaustive_against_recompute(self, kind, L, q):
        spec = fh.ModelSpec(kind, L, q)
        rng = np.random.default_rng(42)
        for _ in range(3):
            lat = fh.SpinLattice.random(spec, rng)
            base = fh.total_energy(lat)
            for site in range(spec.n_sites):
                for value in range(spec.q):
                    changed = lat.copy()
                    changed.sites[site] = value
                    expected = fh.total_energy(changed) - base
                    assert fh.delta_energy(lat, site, value) == expected

    def test_out_of_range_arguments(self, ising4):
        lat = fh.SpinLattice.uniform(ising4)
        with pytest.raises(ValueError):
            fh.delta_energy(lat, ising4.n_sites, 0)
        with pytest.raises(ValueError):
            fh.delta_energy(lat, 0, 2)


class TestIsingLadder:
    def test_l2_levels(self):
        assert fh.ising_ladder(2).levels.tolist() == [-8, 0, 8]

    def test_l4_levels(self):
        lad = fh.ising_ladder(4)
        assert len(lad) == 15
        assert lad.levels.tolist() == [-32, -24, -20, -16, -12, -8, -4, 0,
                                       4, 8, 12, 16, 20, 24, 32]
        assert -28 not in lad and 28 not in lad

    def test_bounds(self):
        lad = fh.ising_ladder(2)
        assert lad.levels[0] == -8 and lad.levels[-1] == 8

    @pytest.mark.parametrize("L", [3, 0, -4])
    def test_rejects_bad_L(self, L):
        with pytest.raises(ValueError):
            fh.ising_ladder(L)

    @pytest.mark.parametrize("L", [2, 4])
    def test_equals_enumerated_set(self, L):
        spec = fh.ModelSpec(fh.ModelKind.ISING, L)
        exact = fh.enumerate_dos(spec)
        assert fh.ising_ladder(L) == exact.ladder

    def test_index_round_trip(self):
        lad = fh.ising_ladder(4)
        for i, e in enumerate(lad.levels):
            assert lad.index_of(int(e)) == i
        with pytest.raises(fh.LadderError):
            lad.index_of(-28)


class TestEnergyOnLadder:
    @pytest.mark.parametrize("kind,L", [(fh.ModelKind.ISING, 4), (fh.ModelKind.POTTS, 2)])
    def test_random_configurations_land_on_ladder(self, kind, L):
        spec = fh.ModelSpec(kind, L)
        ladder = fh.enumerate_dos(spec).ladder
        rng = np.random.default_rng(3)
        for _ in range(200):
            lat = fh.SpinLattice.random(spec, rng)
            assert lat.cached_energy in ladder


class TestDiscoverLadder:
    def test_potts_l2_matches_enumeration(self, potts2, exact_potts2):
        rng = np.random.default_rng(0)
        found = fh.discover_ladder(potts2, 100, rng)
        assert found.exhaustive
        assert found.ladder == exact_potts2.ladder
        # the enumerated admissible set, frozen: 3 of 4 cycle bonds can
        # never be the only satisfied ones on the 2x2 torus
        assert found.ladder.levels.tolist() == [-8, -4, -2, 0]

    @pytest.mark.parametrize("L", [2, 4])
    def test_ising_cross_check(self, L):
        spec = fh.ModelSpec(fh.ModelKind.ISING, L)
        found = fh.discover_ladder(spec, 100, np.random.default_rng(1))
        assert found.exhaustive
        assert found.ladder == fh.ising_ladder(L)

    def test_sampled_mode_warns(self):
        spec = fh.ModelSpec(fh.ModelKind.POTTS, 4, q=10)  # 10^16 states
        with pytest.warns(UserWarning, match="sampled"):
            found = fh.discover_ladder(spec, 500, np.random.default_rng(2))
        assert isinstance(found, LadderDiscovery)
        assert not found.exhaustive
        assert found.ladder.levels[0] >= -2 * spec.n_sites
        assert found.ladder.levels[-1] <= 0
        assert 0 in found.ladder

    def test_rejects_zero_budget(self, potts2):
        with pytest.raises(ValueError):
            fh.discover_ladder(potts2, 0, np.random.default_rng(0))
