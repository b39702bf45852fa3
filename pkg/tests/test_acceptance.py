"""Acceptance criteria 1-11, one test each.

Every test records a one-line PASS/FAIL summary (shown at the end of the
pytest run) before asserting.
"""

import json
import math
import time

import numpy as np
import pytest

from vertexical.cli import main
from vertexical.diagnostics import Ensemble, persistence_probe, verify_factorization
from vertexical.dynamics import CEILING, RatePath, lyapunov_value, sample_rate_path, simulate
from vertexical.fileformat import bundled_names, bundled_path, read_crn
from vertexical.network import ReactionNetwork, orthogonal_residual
from vertexical.reduction import project_system, reduce_network
from vertexical.structure import (
    classify, is_chemical, is_endotactic, is_integer, is_reversible, is_strongly_connected,
    is_strongly_endotactic, is_w_endotactic, is_weakly_reversible, sphere_directions,
    w_endotactic_many,
)
from vertexical.system import SubconfinedSystem
from netgen import GENERATORS, random_network, random_subset, random_system

AB = ("A", "B")


def load(name):
    return read_crn(bundled_path(name))[0].system


def timed(fn, *args):
    t = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t


def test_criterion_01_paper_classifications(criterion):
    lotka = ReactionNetwork.from_strings(AB, ["A -> 2A", "A + B -> 2B", "B -> 0"])
    lvrev = ReactionNetwork.from_strings(AB, ["2A -> A", "2B -> A + B", "0 -> B"])
    cycle = ReactionNetwork.from_strings(("A", "B", "C"), ["A -> B", "B -> C", "C -> A"])
    standin = ReactionNetwork.from_strings(AB, ["0 <-> A", "A + B <-> 2B"])
    (lotka_e, t1) = timed(is_endotactic, lotka)
    (lv, t2) = timed(classify, lvrev)
    (cyc, t3) = timed(is_strongly_endotactic, cycle)
    (st, t4) = timed(classify, standin)
    w = st.witnesses.get("strongly_endotactic")
    checks = [
        lotka_e.value is False,
        lv.endotactic is True and lv.strongly_endotactic is True,
        cyc.value is True,
        st.reversible is True and st.strongly_endotactic is False and w is not None and w[-1] < 0,
        max(t1, t2, t3, t4) < 1.0,
    ]
    ok = criterion(1, all(checks), f"lotka endo={lotka_e.value}, lv-rev strong={lv.strongly_endotactic}, "
                   f"cycle3 strong={cyc.value}, stand-in strong={st.strongly_endotactic} w={None if w is None else [round(float(x), 3) for x in w]}, "
                   f"max time {max(t1, t2, t3, t4):.3f}s")
    assert ok


def test_criterion_02_oracle_consistency(criterion):
    rng = np.random.default_rng(20240502)
    t = time.perf_counter()
    contradictions, unconfirmed, n_false = 0, 0, 0
    for i in range(50):
        # half unconstrained, half rejection-sampled endotactic, so both verdicts get exercised
        if i % 2:
            net = GENERATORS["endotactic"](rng)
        else:
            net = random_network(rng, n_species=int(rng.integers(1, 4)), n_reactions=int(rng.integers(1, 7)),
                                 max_coeff=3)
        assert net.n_species <= 3 and net.n_reactions <= 6
        verdict = is_endotactic(net)
        grid = w_endotactic_many(net, sphere_directions(net.n_species, 10_000))
        if verdict.value is True and not grid.all():
            contradictions += 1
        if verdict.value is False:
            n_false += 1
            if verdict.witness is None or is_w_endotactic(net, verdict.witness, 1e-9).value:
                unconfirmed += 1
        if verdict.value is None:
            contradictions += 1
    elapsed = time.perf_counter() - t
    ok = criterion(2, contradictions == 0 and unconfirmed == 0 and elapsed < 30,
                   f"50 networks, {n_false} non-endotactic, {contradictions} contradictions, "
                   f"{unconfirmed} unconfirmed witnesses, {elapsed:.1f}s")
    assert ok


CHECKERS = {
    "integer": is_integer,
    "chemical": is_chemical,
    "reversible": is_reversible,
    "strongly_connected": is_strongly_connected,
    "weakly_reversible": is_weakly_reversible,
    "endotactic": lambda net: is_endotactic(net).value,
    "strongly_endotactic": lambda net: is_strongly_endotactic(net).value,
}


def test_criterion_03_projectivity(criterion):
    rng = np.random.default_rng(7)
    failures, generated = [], 0
    for cls, gen in GENERATORS.items():
        check = CHECKERS[cls]
        for _ in range(100):
            net = gen(rng)
            assert check(net) is True
            generated += 1
            U = random_subset(rng, net.species)
            if check(reduce_network(net, U)) is not True:
                failures.append((cls, net, U))
    ok = criterion(3, not failures, f"{generated} networks over {len(GENERATORS)} classes, {len(failures)} failures")
    assert ok, failures[:3]


def test_criterion_04_functor_laws(criterion):
    rng = np.random.default_rng(11)
    identity_bad, comp_bad, worst = 0, 0, 0.0
    for _ in range(100):
        N = random_system(rng)
        if project_system(N, N.species) != N:
            identity_bad += 1
        U = random_subset(rng, N.species)
        V = random_subset(rng, U)
        two = project_system(project_system(N, U), V)
        one = project_system(N, V)
        if two.network != one.network or set(two.tempering) != set(one.tempering):
            comp_bad += 1
            continue
        for r, k in one.tempering.items():
            k2 = two.tempering[r]
            for a, b in ((k.lo, k2.lo), (k.hi, k2.hi)):
                rel = abs(a - b) / max(abs(a), abs(b))
                worst = max(worst, rel)
            if (k.lo_open, k.hi_open) != (k2.lo_open, k2.hi_open):
                comp_bad += 1
    ok = criterion(4, identity_bad == 0 and comp_bad == 0 and worst <= 1e-12,
                   f"100 triples, identity failures {identity_bad}, composition failures {comp_bad}, "
                   f"max relative endpoint gap {worst:.2e}")
    assert ok


def test_criterion_05_reduction_example(criterion, capsys, tmp_path):
    out = tmp_path / "reduced.crn"
    code = main(["reduce", str(bundled_path("lv-rev")), "--keep", "A", "--out", str(out)])
    capsys.readouterr()
    net = read_crn(out)[0].network
    got = sorted(net.format_reaction(r) for r in net.reactions)
    ok = criterion(5, code == 0 and got == ["0 -> 0", "0 -> A", "2A -> A"], f"reduced reactions {got}")
    assert ok


def test_criterion_06_conservation(criterion):
    worst, names = 0.0, bundled_names()
    for name in names:
        N = load(name)
        path = sample_rate_path(N, 10.0, 10.0, 0, "midpoint")
        traj = simulate(N, N.base_point, path, 10.0, 1e-3)
        x0 = traj.states[0]
        worst = max(worst, max(orthogonal_residual(N.network, x0, x) for x in traj.states))
    ok = criterion(6, worst <= 1e-6, f"{len(names)} bundled systems, max residual orthogonal to H {worst:.2e}")
    assert ok


def test_criterion_07_closed_form_dynamics(criterion):
    decay = SubconfinedSystem.build(ReactionNetwork.from_strings(("A",), ["A -> 0"]))
    x1 = simulate(decay, [1.0], RatePath.constant([1.0], 1.0), 1.0, 1e-3).states[-1, 0]
    lv = load("lv-rev")
    traj = simulate(lv, [1.0, 1.0], RatePath.constant([1, 1, 1], 10.0), 10.0, 1e-3)
    drift = float(np.max(np.abs(traj.states - 1.0)))
    err = abs(x1 - math.exp(-1))
    ok = criterion(7, err <= 1e-6 and drift <= 1e-9 and traj.times[-1] == 10.0,
                   f"|x(1) - 1/e| = {err:.2e}, steady-state drift {drift:.2e}")
    assert ok


def test_criterion_08_vertexical_factorization(criterion):
    lv = SubconfinedSystem.build(ReactionNetwork.from_strings(AB, ["2A -> A", "2B -> A + B", "0 -> B"]))

    def report(h, reduced=None):
        traj = simulate(lv, [0.01, 1.0], RatePath.constant([1, 1, 1], 0.5), 0.5, h)
        return verify_factorization(lv, traj, ["A"], 0.1, 1e-4, reduced=reduced)

    coarse, fine = report(2e-3), report(1e-3)
    ratio = coarse.max_tangent_error / fine.max_tangent_error
    tampered = report(1e-3, load("lv-rev-keepA-tampered"))
    ok = criterion(8, coarse.passed and fine.passed and fine.n_samples > 0 and max(coarse.max_residual, fine.max_residual) <= 1e-4
                   and ratio >= 3 and not tampered.passed and tampered.max_residual >= 0.1,
                   f"max fiber residual {fine.max_residual:.2e} over {fine.n_samples} samples; "
                   f"tangent error {coarse.max_tangent_error:.2e} -> {fine.max_tangent_error:.2e} "
                   f"(ratio {ratio:.2f}); tampered residual {tampered.max_residual:.3f}")
    assert ok


def test_criterion_09_persistence_probes(criterion):
    band = persistence_probe(load("birth-death"),
                             Ensemble(n_traj=100, seed=0, dt=0.1, t_end=10.0, h=1e-2, scheme="uniform-random"))
    lo = min(t.orthant_min[0] for t in band.trajectories)
    hi = max(t.orthant_max[0] for t in band.trajectories)
    inflow = persistence_probe(load("zeroA"), Ensemble(n_traj=100, seed=0, dt=2e12, t_end=2e12, h=1e9))
    ceiling = sum(t.status == CEILING for t in inflow.trajectories)
    ok = criterion(9, not band.aborted and lo >= 0.5 - 1e-6 and hi <= 2 + 1e-6 and ceiling == 100,
                   f"0<->A: 100 runs within [{lo:.4f}, {hi:.4f}]; 0->A: {ceiling}/100 ceiling aborts")
    assert ok


def test_criterion_10_lyapunov(criterion):
    N = load("isomer")
    traj = simulate(N, [2.0, 0.5], RatePath.constant([1, 1], 10.0), 10.0, 1e-3)
    g = np.array([lyapunov_value(x, [1.25, 1.25]) for x in traj.states])
    worst = float(np.max(np.diff(g)))
    ok = criterion(10, worst <= 1e-9, f"{len(g)} samples, largest consecutive increase {worst:.2e}")
    assert ok


def test_criterion_11_determinism(criterion, capsys, tmp_path):
    outs = []
    for tag in ("a", "b"):
        csv = tmp_path / f"{tag}.csv"
        rep = tmp_path / f"{tag}.json"
        main(["simulate", str(bundled_path("birth-death")), "--scheme", "uniform-random", "--dt", "0.5",
              "--seed", "7", "--out", str(csv), "--report", str(rep)])
        chk = tmp_path / f"{tag}-check.json"
        main(["check", str(bundled_path("rev-standin")), "--report", str(chk)])
        red = tmp_path / f"{tag}-reduce.json"
        main(["reduce", str(bundled_path("lv-rev-k3")), "--keep", "A", "--out", str(tmp_path / f"{tag}.crn"),
              "--report", str(red)])
        outs.append([p.read_bytes() for p in (csv, rep, chk, red, tmp_path / f"{tag}.crn")])
    capsys.readouterr()
    same = all(x == y for x, y in zip(*outs))
    digest_ok = json.loads(outs[0][1])["input_digest"].startswith("sha256:")
    ok = criterion(11, same and digest_ok, f"CSV, JSON reports and reduced file byte-identical across runs: {same}")
    assert ok
