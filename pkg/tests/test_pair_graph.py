"""Surviving-pair graphs of escaping center trajectories."""

import numpy as np
import pytest

from phasespace_lab.models.grids import PhasePoint
from phasespace_lab.models.reports import CenterTrajectory, PairGraph
from phasespace_lab.services.concentration import _check_chain_structure, default_bound_threshold, surviving_pair_graph
from phasespace_lab.services.scenarios import chain_trajectories
from phasespace_lab.utils.constants import CHAIN_TAU_BANDS
from phasespace_lab.utils.errors import PairGraphInvariantError, ParameterError, TrajectoryError

SCALES = np.geomspace(1.0, 100.0, 12)


def _path(wx: float, wxi: float, threshold: float = 1.0) -> CenterTrajectory:
    return CenterTrajectory(
        points=[PhasePoint(x=wx * s, xi=wxi * s) for s in SCALES],
        divergence_threshold=threshold,
    )


def _chain_partner(wx: float, wxi: float, tau: float) -> tuple[float, float]:
    """Direction whose τ-center with (wx, wxi) is the origin."""
    return -(1 - tau) / tau * wx, -tau / (1 - tau) * wxi


class TestSymmetric:
    def test_antipodal_pair_is_a_matching_edge(self):
        graph = surviving_pair_graph([_path(1.0, 0.5), _path(-1.0, -0.5), _path(0.0, 2.0)], tau=0.5, bound_threshold=0.5)
        assert not graph.directed
        assert graph.edges == [(0, 1)]
        assert graph.chains() == [[0, 1]]

    def test_no_pairs(self):
        graph = surviving_pair_graph([_path(1.0, 0.0), _path(0.0, 1.0)], tau=0.5, bound_threshold=0.5)
        assert graph.edges == []


class TestDirected:
    def test_chain_of_three(self):
        tau = 0.25
        w0 = (1.0, 1.0)
        w1 = _chain_partner(*w0, tau)
        w2 = _chain_partner(*w1, tau)
        graph = surviving_pair_graph([_path(*w0), _path(*w1), _path(*w2)], tau=tau, bound_threshold=0.5)
        assert graph.directed
        assert sorted(graph.edges) == [(0, 1), (1, 2)]
        assert graph.chains() == [[0, 1, 2]]
        assert graph.out_degree(0) == 1 and graph.in_degree(0) == 0

    def test_reversed_pair_does_not_survive(self):
        tau = 0.3
        w0 = (2.0, -1.0)
        graph = surviving_pair_graph([_path(*_chain_partner(*w0, tau)), _path(*w0)], tau=tau, bound_threshold=0.5)
        assert graph.edges == [(1, 0)]


class TestPreconditions:
    def test_trajectories_must_separate(self):
        with pytest.raises(TrajectoryError) as info:
            surviving_pair_graph([_path(1.0, 0.0), _path(1.001, 0.0)], tau=0.5, bound_threshold=0.5)
        assert info.value.pairs == [(0, 1)]

    def test_lengths_must_agree(self):
        short = CenterTrajectory(points=[PhasePoint(x=1.0)], divergence_threshold=1.0)
        with pytest.raises(ParameterError):
            surviving_pair_graph([_path(1.0, 0.0), short])

    def test_empty(self):
        with pytest.raises(ParameterError):
            surviving_pair_graph([])

    def test_points_must_be_finite(self):
        with pytest.raises(ValueError):
            CenterTrajectory(points=[PhasePoint(x=float("inf"))], divergence_threshold=1.0)

    def test_default_threshold_is_ten_cells(self):
        # default grid: dx = 1/16, dξ = 1/64
        assert default_bound_threshold() == pytest.approx(10 * np.hypot(1 / 16, 1 / 64))


class TestChainStructure:
    def test_branching_graph_is_rejected(self):
        # separated inputs cannot produce this; build it by hand
        graph = PairGraph(nodes=[0, 1, 2], edges=[(0, 2), (1, 2)], directed=True, tau=0.25)
        with pytest.raises(PairGraphInvariantError):
            _check_chain_structure(graph)

    def test_cycle_is_rejected(self):
        graph = PairGraph(nodes=[0, 1], edges=[(0, 1), (1, 0)], directed=True, tau=0.25)
        with pytest.raises(PairGraphInvariantError):
            _check_chain_structure(graph)

    @pytest.mark.parametrize("seed", range(4))
    def test_random_families_recover_planted_chains(self, seed):
        rng = np.random.default_rng(seed)
        bound = default_bound_threshold()
        accepted = 0
        for _ in range(250):
            lo, hi = CHAIN_TAU_BANDS[int(rng.integers(0, len(CHAIN_TAU_BANDS)))]
            tau = float(rng.uniform(lo, hi))
            trajectories, planted = chain_trajectories(tau, rng, bound)
            try:
                graph = surviving_pair_graph(trajectories, tau, bound)
            except TrajectoryError:
                continue
            accepted += 1
            assert set(graph.edges) == planted
            assert all(len(chain) <= 4 for chain in graph.chains())
        assert accepted > 0

    def test_symmetric_families_are_matchings(self):
        rng = np.random.default_rng(99)
        bound = default_bound_threshold()
        for _ in range(200):
            trajectories, planted = chain_trajectories(0.5, rng, bound)
            try:
                graph = surviving_pair_graph(trajectories, 0.5, bound)
            except TrajectoryError:
                continue
            assert set(graph.edges) == planted
            assert all(graph.out_degree(n) <= 1 for n in graph.nodes)
