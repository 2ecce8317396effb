"""Acceptance gate: one test per required behavior, each printing a single
[acceptance] verdict line (run with -s to see them).

Every suite draws from its own seeded generator so reruns are bit-for-bit
repeatable.
"""

import json
import math
import time
from contextlib import contextmanager

import numpy as np

from conftest import PAULI, density, hermitian, unitary
from qds.cli import main
from qds.entropy import EntropySpec, entropy_from_spectrum
from qds.gkls import (
    GklsGenerator,
    Superoperator,
    classify_equivalence,
    compile_generator,
    conjugation_matrix,
    is_unital_generator,
    unvec,
    vec,
)
from qds.linalg import expm, schatten_norm
from qds.qubit import (
    QubitGeneratorParams,
    build_qubit_generator,
    classify_cone,
    is_positive_qubit_generator,
    stormer_decompose,
)
from qds.states import (
    birkhoff_decompose,
    eigenvalue_vector,
    majorizes,
    maximally_mixed,
    validate_density,
)
from qds.twirling import poisson_twirl, projection_semigroup

ROOT_SEED = 20260817
VN = EntropySpec.von_neumann()

ENTROPY_SET = (
    [EntropySpec.von_neumann()]
    + [EntropySpec.tsallis(q) for q in (0.5, 1.0, 2.0, 3.0)]
    + [EntropySpec.renyi(q) for q in (0.5, 1.0, 2.0, 3.0)]
    + [EntropySpec.schatten_defect(p) for p in (1.5, 2.0, 4.0, math.inf)]
)


@contextmanager
def gate(name):
    try:
        yield
    except BaseException:
        print(f"[acceptance] {name}: FAIL", flush=True)
        raise
    print(f"[acceptance] {name}: PASS", flush=True)


def _traceless_h(d, rng):
    h = hermitian(d, rng)
    return h - np.trace(h) / d * np.eye(d)


def _unital_generator(d, rng):
    """Noise ops individually normal (Hermitian or unitary), hence jointly so."""
    noise = []
    for _ in range(int(rng.integers(1, 4))):
        op = hermitian(d, rng) if rng.random() < 0.5 else unitary(d, rng)
        noise.append((float(rng.uniform(0.1, 1.0)), op))
    return GklsGenerator(_traceless_h(d, rng), noise)


def _generic_generator(d, rng):
    noise = []
    for _ in range(int(rng.integers(1, 4))):
        op = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2 * d)
        noise.append((float(rng.uniform(0.1, 1.0)), op))
    return GklsGenerator(_traceless_h(d, rng), noise)


def _nonunital_generator(d, rng, floor=1e-6):
    while True:
        gen = _generic_generator(d, rng)
        l = compile_generator(gen)
        if float(np.linalg.norm(l.apply(np.eye(d)))) > floor:
            return gen, l


def _vn_of_flow(l, rho0, t_grid):
    """Von Neumann entropy along exp(t l) rho0 over a uniform grid."""
    d = l.dim
    step = expm(l.mat * float(t_grid[1] - t_grid[0]))
    x = vec(rho0)
    out = []
    for i, _ in enumerate(t_grid):
        if i > 0:
            x = step @ x
        out.append(entropy_from_spectrum(VN, eigenvalue_vector(unvec(x, d))))
    return out


def test_equivalence_suite_agrees():
    with gate("equivalence suite agrees across dimensions"):
        started = time.monotonic()
        grid = np.linspace(0.0, 5.0, 50)
        rng = np.random.default_rng(ROOT_SEED)
        for d in (2, 3, 4):
            for i in range(100):
                unital_case = i < 50
                gen = _unital_generator(d, rng) if unital_case else _generic_generator(d, rng)
                rep = classify_equivalence(gen, entropy_set=ENTROPY_SET, t_grid=grid)
                assert rep.all_agree, f"d={d} case={i}"
                if unital_case:
                    assert rep.unital, f"d={d} case={i} expected a unital draw"
                    bad = [k for k, v in rep.entropies_monotone.items() if not v]
                    assert not bad, f"d={d} case={i} non-monotone: {bad}"
        elapsed = time.monotonic() - started
        assert elapsed < 60.0, f"suite took {elapsed:.1f}s"


def test_non_unital_entropy_decrease():
    with gate("non-unital flows lose entropy from the flat state"):
        rng = np.random.default_rng(ROOT_SEED + 1)
        grid = np.linspace(0.0, 0.5, 11)  # probes (0, 0.5] after the start point
        count = 0
        for d in (2, 3, 4):
            for _ in range(34 if d == 2 else 33):
                _, l = _nonunital_generator(d, rng)
                values = _vn_of_flow(l, np.eye(d) / d, grid)
                drop = math.log(d) - min(values[1:])
                assert drop > 1e-8, f"d={d} drop={drop:.3e}"
                count += 1
        assert count == 100


def _two_rate_damping(g1, g2):
    lower = np.array([[0, 1], [0, 0]], dtype=complex)
    return compile_generator(
        GklsGenerator(np.diag([0.5, -0.5]).astype(complex), [(g1, lower), (g2, lower.T.conj())])
    )


def test_two_rate_damping_asymptotics():
    with gate("two-rate damping reaches the balanced spectrum"):
        l = _two_rate_damping(2.0, 1.0)
        out = unvec(expm(l.mat * 30.0) @ vec(np.eye(2) / 2), 2)
        assert np.allclose(eigenvalue_vector(out), [2 / 3, 1 / 3], atol=1e-6)

        l_bal = _two_rate_damping(1.0, 1.0)
        rho0 = validate_density(density(2, np.random.default_rng(ROOT_SEED + 2))).mat
        out = unvec(expm(l_bal.mat * 30.0) @ vec(rho0), 2)
        assert float(np.abs(out - np.eye(2) / 2).max()) < 1e-8


def test_compound_jump_closed_form():
    with gate("compound-jump closed form matches the exponential"):
        rng = np.random.default_rng(ROOT_SEED + 3)
        for _ in range(20):
            d = int(rng.integers(2, 5))
            u = unitary(d, rng)
            lam = float(rng.uniform(0.2, 3.0))
            t = float(rng.uniform(0.05, 3.0))
            jump = lam * (np.kron(u.conj(), u) - np.eye(d * d))
            err = float(np.abs(poisson_twirl(lam, u, t).mat - expm(jump * t)).max())
            assert err < 1e-10, f"deviation {err:.3e}"


def _lueders_generator(gamma, basis):
    d = basis.shape[0]
    noise = [(gamma, np.outer(basis[:, k], basis[:, k].conj())) for k in range(d)]
    return GklsGenerator(np.zeros((d, d)), noise)


def _state_prep_generator(gamma, rho0):
    d = rho0.shape[0]
    evals, evecs = np.linalg.eigh(rho0)
    noise = []
    for j in range(d):
        if evals[j] < 1e-14:
            continue
        for k in range(d):
            noise.append((gamma, math.sqrt(evals[j]) * np.outer(evecs[:, j], np.eye(d)[k])))
    return GklsGenerator(np.zeros((d, d)), noise)


def _superop_projector(gen, gamma):
    """P for a generator of the form gamma (P - id)."""
    l = compile_generator(gen)
    return Superoperator(l.dim, l.mat / gamma + np.eye(l.dim**2))


def test_projection_interpolation():
    with gate("projection interpolation matches the exponential"):
        rng = np.random.default_rng(ROOT_SEED + 4)
        rho0 = np.diag([0.75, 0.25]).astype(complex)
        projectors = [
            _superop_projector(_lueders_generator(1.0, np.eye(3, dtype=complex)), 1.0),
            _superop_projector(_lueders_generator(1.0, unitary(2, rng)), 1.0),
            _superop_projector(_state_prep_generator(1.0, rho0), 1.0),
        ]
        for p in projectors:
            comp = np.eye(p.dim**2) - p.mat
            for t in (0.3, 1.7):
                got = projection_semigroup(p, 0.8, t).mat
                assert np.abs(got - expm(-0.8 * t * comp)).max() < 1e-10

        rep = classify_equivalence(_lueders_generator(1.0, unitary(2, rng)))
        assert rep.unital and rep.all_agree

        gen = _state_prep_generator(1.0, rho0)
        l = compile_generator(gen)
        assert not is_unital_generator(l)
        values = _vn_of_flow(l, np.eye(2) / 2, np.linspace(0.0, 0.5, 11))
        assert math.log(2) - min(values[1:]) > 1e-8


def test_flow_verdict_matches_ball_sampling():
    with gate("flow-matrix verdict matches ball sampling"):
        rng = np.random.default_rng(ROOT_SEED + 5)
        uniform = rng.standard_normal((3, 196))
        uniform /= np.linalg.norm(uniform, axis=0)
        disagreements = 0
        for _ in range(1000):
            q, r = np.linalg.qr(rng.standard_normal((3, 3)))
            q = q * np.sign(np.diag(r))
            if np.linalg.det(q) < 0:
                q[:, 0] = -q[:, 0]
            kappa = rng.uniform(-0.4, 1.2, 3)
            params = QubitGeneratorParams(h=rng.normal(0.0, 0.5, 3), K=q @ np.diag(kappa) @ q.T)
            f = build_qubit_generator(params).F
            exact = is_positive_qubit_generator(f)
            # four probes aim along the most expansive direction: a weak leak
            # behind strong contraction is invisible to uniform draws, while
            # the flow itself still decides whether those probes escape
            _, v3 = np.linalg.eigh(f + f.T)
            aimed = np.column_stack(
                [v3[:, 2], -v3[:, 2], v3[:, 2] + 0.05 * v3[:, 0], v3[:, 2] + 0.05 * v3[:, 1]]
            )
            aimed /= np.linalg.norm(aimed, axis=0)
            states = np.column_stack([uniform, aimed])
            # doubling time ladder: t = 4/4096, 4/2048, ..., 4.0
            prop = expm(f * (4.0 / 4096)).real
            sampled = True
            for _ in range(13):
                if float(np.linalg.norm(prop @ states, axis=0).max()) > 1.0 + 1e-8:
                    sampled = False
                    break
                prop = prop @ prop
            if exact != sampled:
                disagreements += 1
        assert disagreements == 0


def test_cone_anchor_points():
    with gate("diagonal cone anchors classify correctly"):
        cases = (
            ([1.0, 1.0, -0.5], "PTU_only"),
            ([1.0, 1.0, 1.0], "CPTU"),
            ([1.0, -2.0, 0.0], "Outside"),
        )
        for diag, want in cases:
            out = classify_cone(QubitGeneratorParams(h=np.zeros(3), K=np.diag(diag)))
            assert out.verdict == want, f"K=diag{tuple(diag)} gave {out.verdict}"
            assert out.minors_consistent


def _transpose_mat():
    t = np.zeros((4, 4), dtype=complex)
    for j in range(2):
        for k in range(2):
            e = np.zeros((2, 2), dtype=complex)
            e[j, k] = 1.0
            t[:, k * 2 + j] = vec(e.T)
    return t


def _embed_bloch_block(block):
    basis = [PAULI[k] / 2 for k in "1xyz"]
    t = np.column_stack([vec(b) for b in basis])
    m4 = np.eye(4)
    m4[1:, 1:] = block
    return Superoperator(2, t @ m4 @ np.linalg.inv(t))


def _so3(rng):
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def test_rotation_reflection_split():
    with gate("positive qubit maps split over rotations"):
        rng = np.random.default_rng(ROOT_SEED + 6)
        tmat = _transpose_mat()
        corners = np.array(
            [[sx, sy, sz] for sx in (1, -1) for sy in (1, -1) for sz in (1, -1)], dtype=float
        )
        for case in range(300):
            if case < 150:
                k = int(rng.integers(1, 5))
                w = rng.dirichlet(np.ones(k))
                mat = sum(w[i] * conjugation_matrix(unitary(2, rng)) for i in range(k))
                cp_input = True
            else:
                lams = corners.T @ rng.dirichlet(np.ones(8))
                mat = _embed_bloch_block(_so3(rng) @ np.diag(lams) @ _so3(rng)).mat
                cp_input = False
            parts = stormer_decompose(Superoperator(2, mat))
            if cp_input:
                assert parts["nu"] == [], f"case={case}: reflections on a CP input"
            weights = [w for w, _ in parts["mu"]] + [w for w, _ in parts["nu"]]
            assert all(w > 0 for w in weights)
            assert abs(sum(weights) - 1.0) < 1e-9
            recon = np.zeros((4, 4), dtype=complex)
            for w, u in parts["mu"]:
                recon += w * conjugation_matrix(u)
            for w, u in parts["nu"]:
                recon += w * conjugation_matrix(u) @ tmat
            err = float(np.abs(recon - mat).max())
            assert err < 1e-9, f"case={case} reconstruction {err:.3e}"


def test_bistochastic_split_bound():
    with gate("bistochastic split stays within the term bound"):
        rng = np.random.default_rng(ROOT_SEED + 7)
        for _ in range(200):
            d = int(rng.integers(2, 7))
            k = int(rng.integers(1, 2 * d))
            w = rng.dirichlet(np.ones(k))
            b = np.zeros((d, d))
            for i in range(k):
                b[np.arange(d), rng.permutation(d)] += w[i]
            terms = birkhoff_decompose(b)
            assert len(terms) <= d * d - 2 * d + 2
            recon = np.zeros_like(b)
            for wt, perm in terms:
                recon[np.arange(d), list(perm)] += wt
            assert float(np.abs(recon - b).max()) < 1e-9
            vep = np.sort(rng.dirichlet(np.ones(d)))[::-1]
            assert majorizes(vep, b @ vep)


def test_contraction_and_norm_growth():
    with gate("trace norm contracts; other norms can grow"):
        rng = np.random.default_rng(ROOT_SEED + 8)
        gens = []
        for d in (2, 3):
            gens += [compile_generator(_unital_generator(d, rng)) for _ in range(10)]
            gens += [_nonunital_generator(d, rng, floor=1e-2)[1] for _ in range(10)]
        times = (0.2, 1.0, 3.0)
        for l in gens:
            d = l.dim
            for t in times:
                prop = expm(l.mat * t)
                for _ in range(4):
                    x = hermitian(d, rng)
                    y = unvec(prop @ vec(x), d)
                    assert schatten_norm(y, 1) <= schatten_norm(x, 1) + 1e-9
            if float(np.linalg.norm(l.apply(np.eye(d)))) > 1e-2:
                flat = np.eye(d, dtype=complex) / d
                for p in (2.0, math.inf):
                    base = schatten_norm(flat, p)
                    peak = max(
                        schatten_norm(unvec(expm(l.mat * t) @ vec(flat), d), p)
                        for t in (0.2, 0.5, 1.0, 2.0, 4.0)
                    )
                    assert peak > base + 1e-10, f"p={p} never grew"


def _verdict_sweep(seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(25):
        kappa = rng.uniform(-0.5, 1.2, 3)
        q = _so3(rng)
        params = QubitGeneratorParams(h=rng.normal(0.0, 0.5, 3), K=q @ np.diag(kappa) @ q.T)
        cone = classify_cone(params)
        out.append((cone.verdict, cone.minors_consistent))
    for d in (2, 3):
        for _ in range(5):
            rep = classify_equivalence(_generic_generator(d, rng))
            out.append(
                (rep.unital, rep.majorization_ok, rep.kraus_jointly_normal, rep.all_agree)
            )
    return out


def test_seeded_reruns_identical(tmp_path):
    with gate("seeded reruns are identical"):
        assert _verdict_sweep(ROOT_SEED + 9) == _verdict_sweep(ROOT_SEED + 9)

        cfg = tmp_path / "cfg.json"
        cfg.write_text(
            json.dumps(
                {"named_example": {"name": "example4", "gamma1": 2.0, "gamma2": 1.0, "omega": 1.0}}
            )
        )
        blobs = {"classify": [], "evolve": []}
        for tag in ("a", "b"):
            rep = tmp_path / f"rep-{tag}.json"
            assert main(["classify", str(cfg), "--out", str(rep)]) == 0
            blobs["classify"].append(rep.read_bytes())
            csv = tmp_path / f"trace-{tag}.csv"
            argv = [
                "evolve", str(cfg),
                "--t-max", "2.0",
                "--steps", "9",
                "--state", "random:7",
                "--out", str(csv),
            ]
            assert main(argv) == 0
            blobs["evolve"].append(csv.read_bytes())
        assert blobs["classify"][0] == blobs["classify"][1]
        assert blobs["evolve"][0] == blobs["evolve"][1]
