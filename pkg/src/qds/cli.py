"""Command-line front end.

Subcommands:
  classify    generator config -> JSON verdict report
  evolve      generator config -> CSV entropy trace along exp(tL)
  birkhoff    bistochastic matrix JSON -> permutation decomposition JSON
  qubit-cone  (h, K) parameters -> cone membership JSON

Configs are JSON. Complex entries are written as {"re": x, "im": y} (plain
numbers are taken as real). A generator config carries exactly one of:
explicit {dimension, hamiltonian, noise}, {qubit_params: {h, K}}, or
{named_example: {name, ...}} with name in example1/example2/example4/
example5/example6.

Exit codes: 0 ok, 2 config error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from ._random import haar_unitary, random_density, random_traceless_orthonormal_set
from .entropy import EntropySpec, entropy_from_spectrum
from .errors import (
    ConfigError,
    DimensionMismatch,
    EvolutionLeftStateSpace,
    InvalidGenerator,
    InvalidP,
    InvalidQ,
    LengthMismatch,
    NotAdjointPreserving,
    NotBistochastic,
    QdsError,
)
from .gkls import (
    GklsGenerator,
    check_positive_generator,
    classify_equivalence,
    compile_generator,
    gkls_diagnostics,
    is_unital_generator,
    unvec,
    vec,
)
from .linalg import expm, schatten_norm
from .qubit import QubitGeneratorParams, build_qubit_generator, classify_cone, matrix_rep
from .states import birkhoff_decompose, eigenvalue_vector, maximally_mixed, validate_density

_EXAMPLES = ("example1", "example2", "example4", "example5", "example6")

REPORT_SCHEMA = {
    "type": "object",
    "required": [
        "dimension",
        "unital",
        "gkls",
        "positive_sampled",
        "equivalence_all_agree",
        "diagnostics",
    ],
    "properties": {
        "dimension": {"type": "integer", "minimum": 2},
        "unital": {"type": "boolean"},
        "gkls": {"type": "boolean"},
        "positive_sampled": {"type": "boolean"},
        "equivalence_all_agree": {"type": "boolean"},
        "qubit_cone": {
            "type": ["object", "null"],
            "required": ["verdict", "K_eigenvalues", "P_eigenvalues", "minors_consistent"],
            "properties": {
                "verdict": {"enum": ["CPTU", "PTU_only", "Outside"]},
                "K_eigenvalues": {"type": "array", "items": {"type": "number"}},
                "P_eigenvalues": {"type": "array", "items": {"type": "number"}},
                "minors_consistent": {"type": "boolean"},
            },
            "additionalProperties": False,
        },
        "diagnostics": {
            "type": "object",
            "required": [
                "adjoint_preserving",
                "trace_annihilating",
                "conditionally_cp",
                "positivity_sampled",
                "entropies_monotone",
                "majorization_ok",
            ],
            "properties": {
                "adjoint_preserving": {"type": "boolean"},
                "trace_annihilating": {"type": "boolean"},
                "conditionally_cp": {"type": "boolean"},
                "adjoint_defect": {"type": "number"},
                "trace_defect": {"type": "number"},
                "conditional_choi_min": {"type": ["number", "null"]},
                "positivity_sampled": {"type": "boolean"},
                "positivity_witness_found": {"type": "boolean"},
                "entropies_monotone": {
                    "type": "object",
                    "additionalProperties": {"type": "boolean"},
                },
                "majorization_ok": {"type": "boolean"},
                "kraus_jointly_normal": {"type": "boolean"},
                "entropy_decrease_witness": {
                    "type": "object",
                    "required": ["found", "t", "entropy_start", "entropy", "drop"],
                },
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

BIRKHOFF_SCHEMA = {
    "type": "object",
    "required": [
        "dimension",
        "terms",
        "max_terms",
        "weights",
        "permutations",
        "weights_sum",
        "reconstruction_error",
    ],
    "properties": {
        "dimension": {"type": "integer", "minimum": 1},
        "terms": {"type": "integer", "minimum": 1},
        "max_terms": {"type": "integer"},
        "weights": {"type": "array", "items": {"type": "number", "minimum": 0}},
        "permutations": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        },
        "weights_sum": {"type": "number"},
        "reconstruction_error": {"type": "number"},
    },
    "additionalProperties": False,
}

CONE_SCHEMA = {
    "type": "object",
    "required": ["verdict", "K_eigenvalues", "P_eigenvalues", "minors_consistent"],
    "properties": {
        "verdict": {"enum": ["CPTU", "PTU_only", "Outside"]},
        "K_eigenvalues": {"type": "array", "items": {"type": "number"}},
        "P_eigenvalues": {"type": "array", "items": {"type": "number"}},
        "minors": {"type": "array", "items": {"type": "number"}},
        "minors_consistent": {"type": "boolean"},
    },
    "additionalProperties": False,
}


def _entry(obj, where: str) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, dict):
        re = obj.get("re", 0.0)
        im = obj.get("im", 0.0)
        extra = set(obj) - {"re", "im"}
        if extra or not all(isinstance(v, (int, float)) for v in (re, im)):
            raise ConfigError(f"{where}: bad complex entry {obj!r}")
        return complex(re, im)
    raise ConfigError(f"{where}: entries must be numbers or re/im objects, got {obj!r}")


def _matrix(obj, where: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise ConfigError(f"{where}: expected a nested array")
    rows = [[_entry(x, where) for x in r] for r in obj]
    width = {len(r) for r in rows}
    if len(width) != 1:
        raise ConfigError(f"{where}: ragged rows")
    return np.array(rows, dtype=np.complex128)


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qds-tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _qubit_params_from(cfg: dict) -> QubitGeneratorParams:
    h = cfg.get("h", [0.0, 0.0, 0.0])
    k = cfg.get("K")
    if k is None:
        raise ConfigError("qubit parameters need a K matrix")
    if not (isinstance(h, list) and len(h) == 3 and all(isinstance(x, (int, float)) for x in h)):
        raise ConfigError(f"h must be a list of 3 reals, got {h!r}")
    km = _matrix(k, "K")
    if km.shape != (3, 3):
        raise DimensionMismatch(f"K must be 3x3, got {km.shape}")
    if float(np.abs(km.imag).max()) > 0:
        raise ConfigError("K must be real")
    return QubitGeneratorParams(h=np.array(h, dtype=float), K=km.real)


def _named_example(spec: dict) -> tuple[GklsGenerator, QubitGeneratorParams | None]:
    if not isinstance(spec, dict) or "name" not in spec:
        raise ConfigError("named_example must be an object with a name")
    name = spec["name"]
    if name not in _EXAMPLES:
        raise ConfigError(f"unknown example {name!r}, pick one of {_EXAMPLES}")
    if name == "example1":
        lam = float(spec.get("lambda", 1.0))
        if lam <= 0:
            raise ConfigError("example1 needs lambda > 0")
        if "unitary" in spec:
            u = _matrix(spec["unitary"], "unitary")
            d = u.shape[0]
        else:
            d = int(spec.get("dimension", 2))
            u = haar_unitary(d, np.random.default_rng(int(spec.get("seed", 0))))
        return GklsGenerator(np.zeros((d, d)), [(lam, u)]), None
    if name == "example2":
        d = int(spec.get("dimension", 2))
        rates = spec.get("rates", [1.0])
        if not rates or any(r < 0 for r in rates):
            raise ConfigError("example2 rates must be nonnegative and nonempty")
        rng = np.random.default_rng(int(spec.get("seed", 0)))
        ops = random_traceless_orthonormal_set(d, len(rates), rng)
        ham = (
            _matrix(spec["hamiltonian"], "hamiltonian")
            if "hamiltonian" in spec
            else np.zeros((d, d))
        )
        return GklsGenerator(ham, list(zip(map(float, rates), ops))), None
    if name == "example4":
        g1 = float(spec.get("gamma1", 1.0))
        g2 = float(spec.get("gamma2", 1.0))
        if g1 < 0 or g2 < 0:
            raise ConfigError("example4 rates must be nonnegative")
        omega = float(spec.get("omega", 1.0))
        ham = omega * np.diag([0.5, -0.5]).astype(np.complex128)
        lower = np.array([[0, 1], [0, 0]], dtype=np.complex128)
        raise_ = lower.conj().T
        return GklsGenerator(ham, [(g1, lower), (g2, raise_)]), None
    if name == "example5":
        gamma = float(spec.get("gamma", 1.0))
        if gamma <= 0:
            raise ConfigError("example5 needs gamma > 0")
        kind = spec.get("projection", "luders")
        d = int(spec.get("dimension", 2))
        if kind == "luders":
            if "seed" in spec:
                basis = haar_unitary(d, np.random.default_rng(int(spec["seed"])))
            else:
                basis = np.eye(d, dtype=np.complex128)
            noise = []
            for k in range(d):
                col = basis[:, k]
                noise.append((gamma, np.outer(col, col.conj())))
            return GklsGenerator(np.zeros((d, d)), noise), None
        if kind == "state":
            if "rho0" in spec:
                rho0 = validate_density(_matrix(spec["rho0"], "rho0")).mat
                d = rho0.shape[0]
            else:
                rho0 = random_density(d, np.random.default_rng(int(spec.get("seed", 0))))
            evals, evecs = np.linalg.eigh(rho0)  # rho0 is already validated/hermitian
            noise = []
            for j in range(d):
                lam_j = float(max(evals[j], 0.0))
                if lam_j < 1e-14:
                    continue
                for k in range(d):
                    m = np.zeros((d, d), dtype=np.complex128)
                    m += math.sqrt(lam_j) * np.outer(evecs[:, j], np.eye(d)[k])
                    noise.append((gamma, m))
            return GklsGenerator(np.zeros((d, d)), noise), None
        raise ConfigError(f"example5 projection must be luders or state, got {kind!r}")
    # example6: qubit cone instance
    params = _qubit_params_from(
        {"h": spec.get("h", [0.0, 0.0, 0.0]), "K": spec.get("K", [[1, 0, 0], [0, 1, 0], [0, 0, -0.5]])}
    )
    return build_qubit_generator(params).gen, params


def _generator_from_config(cfg) -> tuple[GklsGenerator, QubitGeneratorParams | None]:
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    explicit = "hamiltonian" in cfg or "noise" in cfg
    routes = [explicit, "qubit_params" in cfg, "named_example" in cfg]
    if sum(routes) != 1:
        raise ConfigError(
            "config must carry exactly one of: explicit matrices, qubit_params, named_example"
        )
    if "qubit_params" in cfg:
        params = _qubit_params_from(cfg["qubit_params"])
        return build_qubit_generator(params).gen, params
    if "named_example" in cfg:
        return _named_example(cfg["named_example"])
    if "dimension" not in cfg or "hamiltonian" not in cfg:
        raise ConfigError("explicit config needs dimension and hamiltonian")
    d = cfg["dimension"]
    if not isinstance(d, int) or d < 2:
        raise ConfigError(f"dimension must be an integer >= 2, got {d!r}")
    ham = _matrix(cfg["hamiltonian"], "hamiltonian")
    if ham.shape != (d, d):
        raise DimensionMismatch(f"hamiltonian shape {ham.shape}, expected {(d, d)}")
    noise = []
    for idx, item in enumerate(cfg.get("noise", [])):
        if not isinstance(item, dict) or "rate" not in item or "matrix" not in item:
            raise ConfigError(f"noise[{idx}] must be an object with rate and matrix")
        mat = _matrix(item["matrix"], f"noise[{idx}].matrix")
        if mat.shape != (d, d):
            raise DimensionMismatch(f"noise[{idx}] shape {mat.shape}, expected {(d, d)}")
        noise.append((float(item["rate"]), mat))
    try:
        return GklsGenerator(ham, noise), None
    except InvalidGenerator as exc:
        raise ConfigError(f"invalid generator matrices: {exc}") from exc


def _cone_json(params: QubitGeneratorParams) -> dict:
    v = classify_cone(params)
    return {
        "verdict": v.verdict,
        "K_eigenvalues": [float(x) for x in v.K_eigenvalues],
        "P_eigenvalues": [float(x) for x in v.P_eigenvalues],
        "minors_consistent": bool(v.minors_consistent),
    }


def _cone_from_compiled(l) -> dict | None:
    """Recover (h, K) from the Bloch form of an unexceptional unital qubit
    generator; None when the generator is not in that class."""
    try:
        m4 = matrix_rep(l)
    except NotAdjointPreserving:
        return None
    if float(np.linalg.norm(m4[0, :])) > 1e-9 or float(np.linalg.norm(m4[1:, 0])) > 1e-9:
        return None
    f = m4[1:, 1:]
    p = -(f + f.T)
    k = (np.trace(p) / 2.0) * np.eye(3) - p
    h = np.array(
        [(f[2, 1] - f[1, 2]) / 2.0, (f[0, 2] - f[2, 0]) / 2.0, (f[1, 0] - f[0, 1]) / 2.0]
    )
    return _cone_json(QubitGeneratorParams(h=h, K=k))


def _entropy_decrease_witness(l, d: int) -> dict:
    s0 = math.log(d)
    rho_star = maximally_mixed(d).mat
    best = {"found": False, "t": 0.0, "entropy_start": s0, "entropy": s0, "drop": 0.0}
    vn = EntropySpec.von_neumann()
    for t in np.linspace(0.05, 0.5, 10):
        rho_t = unvec(expm(l.mat * float(t)) @ vec(rho_star), d)
        spectrum = eigenvalue_vector((rho_t + rho_t.conj().T) / 2.0)
        s_t = entropy_from_spectrum(vn, spectrum)
        drop = s0 - s_t
        if drop > best["drop"]:
            best = {
                "found": bool(drop > 1e-8),
                "t": float(t),
                "entropy_start": s0,
                "entropy": float(s_t),
                "drop": float(drop),
            }
    return best


def _cmd_classify(args) -> int:
    cfg = _load_json(args.config)
    gen, params = _generator_from_config(cfg)
    l = compile_generator(gen)
    d = gen.dim
    unital = is_unital_generator(l)
    diag = gkls_diagnostics(l)
    pos = check_positive_generator(l, samples=args.samples, seed=args.seed)
    rep = classify_equivalence(gen, seed=args.seed)
    diagnostics = {
        "adjoint_preserving": diag["adjoint_preserving"],
        "trace_annihilating": diag["trace_annihilating"],
        "conditionally_cp": diag["conditionally_cp"],
        "adjoint_defect": float(diag["adjoint_defect"]),
        "trace_defect": float(diag["trace_defect"]),
        "conditional_choi_min": diag["conditional_choi_min"],
        "positivity_sampled": bool(pos["sampled"]),
        "positivity_witness_found": pos["basis_witness"] is not None,
        "entropies_monotone": {k: bool(v) for k, v in rep.entropies_monotone.items()},
        "majorization_ok": bool(rep.majorization_ok),
        "kraus_jointly_normal": bool(rep.kraus_jointly_normal),
    }
    if not unital:
        diagnostics["entropy_decrease_witness"] = _entropy_decrease_witness(l, d)
    report = {
        "dimension": d,
        "unital": bool(unital),
        "gkls": bool(
            diag["adjoint_preserving"] and diag["trace_annihilating"] and diag["conditionally_cp"]
        ),
        "positive_sampled": bool(pos["verdict"]),
        "equivalence_all_agree": bool(rep.all_agree),
        "diagnostics": diagnostics,
    }
    if params is not None:
        report["qubit_cone"] = _cone_json(params)
    elif d == 2:
        report["qubit_cone"] = _cone_from_compiled(l)
    _write_text(args.out, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0


def _parse_entropies(tokens: str) -> list[EntropySpec]:
    specs = []
    for raw in tokens.split(","):
        token = raw.strip()
        if not token:
            continue
        try:
            if token == "vn":
                specs.append(EntropySpec.von_neumann())
            elif token.startswith("tsallis:"):
                specs.append(EntropySpec.tsallis(float(token.split(":", 1)[1])))
            elif token.startswith("renyi:"):
                specs.append(EntropySpec.renyi(float(token.split(":", 1)[1])))
            elif token.startswith("np:"):
                arg = token.split(":", 1)[1]
                specs.append(EntropySpec.schatten_defect(float("inf") if arg == "inf" else float(arg)))
            else:
                raise ConfigError(f"unknown entropy token {token!r}")
        except (ValueError, InvalidQ, InvalidP) as exc:
            raise ConfigError(f"bad entropy token {token!r}: {exc}") from exc
    if not specs:
        raise ConfigError("no entropy columns requested")
    return specs


def _initial_state(token: str, d: int):
    if token == "mms":
        return maximally_mixed(d)
    if token.startswith("random:"):
        try:
            seed = int(token.split(":", 1)[1])
        except ValueError as exc:
            raise ConfigError(f"bad state token {token!r}") from exc
        return validate_density(random_density(d, np.random.default_rng(seed)))
    if token.startswith("file:"):
        data = _load_json(token.split(":", 1)[1])
        mat = _matrix(data["matrix"] if isinstance(data, dict) else data, "state")
        if mat.shape != (d, d):
            raise DimensionMismatch(f"state shape {mat.shape}, expected {(d, d)}")
        return validate_density(mat)
    raise ConfigError(f"state must be mms, random:SEED or file:PATH, got {token!r}")


def _cmd_evolve(args) -> int:
    cfg = _load_json(args.config)
    gen, _ = _generator_from_config(cfg)
    if args.t_max <= 0:
        raise ConfigError(f"--t-max must be positive, got {args.t_max}")
    if args.steps < 2:
        raise ConfigError(f"--steps must be at least 2, got {args.steps}")
    specs = _parse_entropies(args.entropies)
    l = compile_generator(gen)
    d = gen.dim
    state = _initial_state(args.state, d)
    grid = np.linspace(0.0, args.t_max, args.steps)
    step = expm(l.mat * float(grid[1] - grid[0]))
    labels = [s.label for s in specs]
    lines = ["t," + ",".join(labels) + ",purity,trace_norm"]
    rhovec = vec(state.mat)
    for i, t in enumerate(grid):
        if i > 0:
            rhovec = step @ rhovec
        rho = unvec(rhovec, d)
        try:
            current = validate_density(rho, tol=1e-7)
        except QdsError as exc:
            raise EvolutionLeftStateSpace(f"state invalid at t={float(t)!r}: {exc}") from exc
        spectrum = eigenvalue_vector(current)
        values = [entropy_from_spectrum(s, spectrum) for s in specs]
        purity = float(np.trace(current.mat @ current.mat).real)
        tnorm = schatten_norm(current.mat, 1)
        cells = [repr(float(t))]
        cells += [repr(float(v)) for v in values]
        cells.append(repr(purity))
        cells.append(repr(tnorm))
        lines.append(",".join(cells))
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_birkhoff(args) -> int:
    data = _load_json(args.matrix)
    raw = data["matrix"] if isinstance(data, dict) and "matrix" in data else data
    mat = _matrix(raw, "matrix")
    if float(np.abs(mat.imag).max()) > 0:
        raise ConfigError("bistochastic input must be real")
    b = mat.real
    try:
        terms = birkhoff_decompose(b)
    except (NotBistochastic, LengthMismatch) as exc:
        raise ConfigError(f"not a bistochastic matrix: {exc}") from exc
    d = b.shape[0]
    recon = np.zeros_like(b)
    for w, perm in terms:
        for r, c in enumerate(perm):
            recon[r, c] += w
    report = {
        "dimension": d,
        "terms": len(terms),
        "max_terms": d * d - 2 * d + 2,
        "weights": [w for w, _ in terms],
        "permutations": [list(p) for _, p in terms],
        "weights_sum": float(sum(w for w, _ in terms)),
        "reconstruction_error": float(np.abs(recon - b).max()),
    }
    _write_text(args.out, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0


def _floats(text: str, what: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad {what} list {text!r}: {exc}") from exc


def _cmd_qubit_cone(args) -> int:
    h = _floats(args.h, "--h")
    if len(h) != 3:
        raise ConfigError(f"--h needs 3 values, got {len(h)}")
    kvals = _floats(args.K, "--K")
    if len(kvals) == 9:
        k = np.array(kvals).reshape(3, 3)
    elif len(kvals) == 6:  # upper triangle k11,k12,k13,k22,k23,k33
        k = np.zeros((3, 3))
        k[0, 0], k[0, 1], k[0, 2], k[1, 1], k[1, 2], k[2, 2] = kvals
        k = k + np.triu(k, 1).T
    else:
        raise ConfigError(f"--K needs 9 (row-major) or 6 (upper-triangle) values, got {len(kvals)}")
    params = QubitGeneratorParams(h=np.array(h), K=k)
    v = classify_cone(params)
    report = _cone_json(params)
    report["minors"] = [float(m) for m in v.minors]
    _write_text(args.out, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qds", description="quantum dynamical semigroup toolbox"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_cls = sub.add_parser("classify", help="verdict report for a generator config")
    p_cls.add_argument("config")
    p_cls.add_argument("--samples", type=int, default=200)
    p_cls.add_argument("--seed", type=int, default=0)
    p_cls.add_argument("--out", default=None)
    p_cls.set_defaults(func=_cmd_classify)

    p_ev = sub.add_parser("evolve", help="entropy trace CSV along the semigroup")
    p_ev.add_argument("config")
    p_ev.add_argument("--t-max", dest="t_max", type=float, required=True)
    p_ev.add_argument("--steps", type=int, required=True)
    p_ev.add_argument("--entropies", default="vn,tsallis:2,renyi:2,np:inf")
    p_ev.add_argument("--state", default="mms")
    p_ev.add_argument("--out", default=None)
    p_ev.set_defaults(func=_cmd_evolve)

    p_bk = sub.add_parser("birkhoff", help="permutation decomposition of a bistochastic matrix")
    p_bk.add_argument("matrix")
    p_bk.add_argument("--out", default=None)
    p_bk.set_defaults(func=_cmd_birkhoff)

    p_qc = sub.add_parser("qubit-cone", help="cone membership of an (h, K) generator")
    p_qc.add_argument("--h", required=True)
    p_qc.add_argument("--K", required=True)
    p_qc.add_argument("--out", default=None)
    p_qc.set_defaults(func=_cmd_qubit_cone)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DimensionMismatch) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except QdsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (np.linalg.LinAlgError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
