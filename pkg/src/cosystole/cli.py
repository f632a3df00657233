"""Command-line entry point: one dispatcher over all subcommands.

Reports are line-oriented ``key: value`` blocks in a stable order so that
equal inputs, flags, and seed produce identical bytes; the worker count
never appears in a report and never changes one.  Exit status 0 means
success, 2 an input or format problem, 3 a budget problem.

The default exhaustive-search budget comes from the COSYSTOLE_BUDGET
environment variable when set.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .abelian import FiniteAbelianGroup
from .cochains import Cochain, cosystole
from .complexes import SimplicialComplex, WeightScheme
from .covers import (
    EdgeLabeling,
    build_cover,
    lower_bound_report,
    pushforward_theta,
    shapiro_check,
    vanishing_test,
)
from .errors import CapacityError, CosystoleError, InputError
from .expansion import (
    coboundary_expander_check,
    cosystolic_expander_check,
    expansion_constant,
    km_hypotheses_report,
    upper_laplacian_spectrum,
)
from .generators import (
    complete_complex,
    cycle_complex,
    flag_complex_subspaces,
    octahedron,
    random_complex,
    torus_7,
)
from .sofic import (
    AlmostHom,
    CentralExtensionSpec,
    ExtensionApproximation,
    Presentation,
    afree_vanishing_check,
    compare_delta_beta,
    defect_cocycle,
    defect_report,
    induce_quotient,
    stability_match,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAPACITY = 3

NORMALIZATION_NOTE = "per-degree weights normalized to total mass 1"
ASPHERICITY_NOTE = (
    "group-cohomology readings assume the base complex is aspherical; "
    "this is an input contract, not verified"
)


@dataclass
class RunConfig:
    budget: int
    eigensolver_max: int
    word_length: int
    seed: int
    certified_only: bool
    heuristic: bool
    scheme_kind: str
    workers: int
    out: str | None


def _default_budget() -> int:
    raw = os.environ.get("COSYSTOLE_BUDGET")
    if raw:
        try:
            value = int(float(raw))
            if value > 0:
                return value
        except ValueError:
            pass
    return 1 << 20


def _add_common(parser):
    parser.add_argument("--budget", type=lambda s: int(float(s)), default=_default_budget(),
                        help="max leaves of exhaustive searches")
    parser.add_argument("--eigensolver-max", type=int, default=2000)
    parser.add_argument("--word-length", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--certified-only", action="store_true",
                        help="suppress heuristic (non-certified) numbers")
    parser.add_argument("--heuristic", action="store_true",
                        help="allow flagged heuristic searches over budget")
    parser.add_argument("--scheme", choices=("mu", "m"), default="mu")
    parser.add_argument("--workers", type=int, default=1,
                        help="worker count for searches; never changes output bytes")
    parser.add_argument("--out", default=None, help="write the report to a file")


def _config(args) -> RunConfig:
    if args.budget <= 0 or args.workers < 1:
        raise InputError("budgets and worker counts must be positive")
    return RunConfig(
        args.budget,
        args.eigensolver_max,
        args.word_length,
        args.seed,
        args.certified_only,
        args.heuristic,
        args.scheme,
        args.workers,
        args.out,
    )


def _header(command: str, cfg: RunConfig):
    return [
        ("tool", f"cosystole {__version__}"),
        ("command", command),
        ("scheme", cfg.scheme_kind),
        ("normalization", NORMALIZATION_NOTE),
        ("seed", str(cfg.seed)),
        ("budget", str(cfg.budget)),
        ("certified-only", str(cfg.certified_only).lower()),
    ]


def _emit(lines, cfg: RunConfig) -> int:
    text = "\n".join(f"{k}: {v}" for k, v in lines) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _load_complex(path: str) -> SimplicialComplex:
    return SimplicialComplex.parse(_read(path))


def _load_group(text: str) -> FiniteAbelianGroup:
    return FiniteAbelianGroup.parse(text)


def _load_scheme(X, cfg: RunConfig) -> WeightScheme:
    return WeightScheme.m(X) if cfg.scheme_kind == "m" else WeightScheme.mu(X)


def _load_cochain(path, X, degree, coeffs) -> Cochain:
    return Cochain.parse(_read(path), X, degree, coeffs)


def _value_or_suppressed(value, certified, cfg: RunConfig) -> str:
    if not certified and cfg.certified_only:
        return "suppressed (heuristic)"
    return str(value)


# -- subcommand handlers ----------------------------------------------------------


def _cmd_generate(args, cfg):
    if args.family == "complete":
        X = complete_complex(args.n, args.d)
        notes = []
    elif args.family == "cycle":
        X = cycle_complex(args.n)
        notes = []
    elif args.family == "flag":
        X = flag_complex_subspaces(args.q)
        notes = []
    elif args.family == "torus":
        X = torus_7()[0]
        notes = []
    elif args.family == "octahedron":
        X = octahedron()
        notes = []
    else:
        result = random_complex(args.n, args.d, args.p, args.seed)
        X = result.complex
        notes = [f"# retries: {result.retries}", f"# purified: {str(result.purified).lower()}"]
        if result.dropped_faces:
            notes.append(
                "# dropped: " + "; ".join(" ".join(map(str, f)) for f in result.dropped_faces)
            )
    header = [
        f"# tool: cosystole {__version__}",
        f"# family: {args.family}",
        f"# seed: {args.seed}",
    ]
    text = "\n".join(header + notes) + "\n" + X.format()
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_analyze(args, cfg):
    X = _load_complex(args.complex)
    scheme = _load_scheme(X, cfg)
    lines = _header("analyze-complex", cfg)
    lines.append(("dimension", str(X.dim)))
    for i in range(X.dim + 1):
        lines.append((f"cells[{i}]", str(X.n_simplices(i))))
    lines.append(("euler-characteristic", str(X.euler_characteristic())))
    lines.append(("degree-bound", str(max(X.top_coface_count((v,)) for v in X.vertices))))
    for i in range(X.dim + 1):
        total = sum(scheme.degree_weights(i).values(), Fraction(0))
        lines.append((f"weight-total[{i}]", str(total)))
    return _emit(lines, cfg)


def _cmd_cosystole(args, cfg):
    X = _load_complex(args.complex)
    group = _load_group(args.coeff)
    scheme = _load_scheme(X, cfg)
    result = cosystole(
        X, args.degree, group, scheme=scheme, budget=cfg.budget,
        heuristic=cfg.heuristic, seed=cfg.seed, workers=cfg.workers,
    )
    lines = _header("cosystole", cfg)
    lines.append(("degree", str(args.degree)))
    lines.append(("group", str(group)))
    if result.value is None:
        lines.append(("cosystole", "infinity (no nonzero classes)"))
    else:
        lines.append(("cosystole", _value_or_suppressed(result.value, result.certified, cfg)))
    lines.append(("certified", str(result.certified).lower()))
    lines.append(("nonzero-classes", str(result.class_count)))
    return _emit(lines, cfg)


def _cmd_expansion(args, cfg):
    X = _load_complex(args.complex)
    group = _load_group(args.coeff)
    scheme = _load_scheme(X, cfg)
    if args.check:
        dims = range(X.dim) if args.degree is None else [args.degree]
        check = (
            coboundary_expander_check if args.check == "coboundary" else cosystolic_expander_check
        )
        kwargs = dict(
            scheme=scheme, budget=cfg.budget, heuristic=cfg.heuristic,
            seed=cfg.seed, workers=cfg.workers,
        )
        if args.check == "coboundary":
            report = check(X, group, dims, eps_target=Fraction(args.target), **kwargs)
        else:
            report = check(X, group, dims, Fraction(args.target), **kwargs)
        lines = _header("expansion", cfg) + report.lines()
        return _emit(lines, cfg)
    if args.degree is None:
        raise InputError("--degree is required without --check")
    result = expansion_constant(
        X, args.degree, group, scheme=scheme, budget=cfg.budget,
        heuristic=cfg.heuristic, seed=cfg.seed, workers=cfg.workers,
    )
    lines = _header("expansion", cfg)
    lines.append(("degree", str(args.degree)))
    lines.append(("group", str(group)))
    if result.value is None:
        lines.append(("epsilon", "vacuous (every cochain is a cocycle)"))
    else:
        lines.append(("epsilon", _value_or_suppressed(result.value, result.certified, cfg)))
    lines.append(("certified", str(result.certified).lower()))
    lines.append(("method", result.method))
    return _emit(lines, cfg)


def _cmd_km(args, cfg):
    X = _load_complex(args.complex)
    group = _load_group(args.coeff)
    report = km_hypotheses_report(
        X, group, Fraction(args.beta), float(args.mu),
        budget=cfg.budget, max_size=cfg.eigensolver_max,
        seed=cfg.seed, workers=cfg.workers,
    )
    return _emit(_header("km-hypotheses", cfg) + report.lines(), cfg)


def _cmd_spectrum(args, cfg):
    X = _load_complex(args.complex)
    spec = upper_laplacian_spectrum(X, args.degree, max_size=cfg.eigensolver_max)
    lines = _header("spectrum", cfg)
    lines.append(("degree", str(args.degree)))
    lines.append(("eigenvalues", " ".join(f"{v:.12g}" for v in spec)))
    return _emit(lines, cfg)


def _cmd_build_cover(args, cfg):
    X = _load_complex(args.complex)
    labeling = EdgeLabeling.parse(_read(args.labeling), X)
    cover = build_cover(X, labeling)
    header = [
        f"# tool: cosystole {__version__}",
        f"# fiber: {cover.fiber}",
        f"# connected: {str(cover.is_connected()).lower()}",
        f"# euler-characteristic: {cover.total.euler_characteristic()}",
    ]
    text = "\n".join(header) + "\n" + cover.total.format()
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_pushforward(args, cfg):
    X = _load_complex(args.complex)
    labeling = EdgeLabeling.parse(_read(args.labeling), X)
    group = _load_group(args.coeff)
    c = _load_cochain(args.cochain, X, args.degree, group)
    pushed = pushforward_theta(X, labeling, c)
    header = [
        f"# tool: cosystole {__version__}",
        f"# fiber: {labeling.fiber}",
        f"# degree: {args.degree}",
        f"# group: {group}",
    ]
    text = "\n".join(header) + "\n" + pushed.format()
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_shapiro(args, cfg):
    X = _load_complex(args.complex)
    labeling = EdgeLabeling.parse(_read(args.labeling), X)
    group = _load_group(args.coeff)
    scheme = _load_scheme(X, cfg)
    c = _load_cochain(args.cochain, X, args.degree, group)
    result = shapiro_check(
        X, labeling, c, scheme=scheme, budget=cfg.budget,
        heuristic=cfg.heuristic, seed=cfg.seed, workers=cfg.workers,
    )
    lines = _header("shapiro-check", cfg)
    lines.append(("fiber", str(labeling.fiber)))
    lines.append(("norm-downstairs", _value_or_suppressed(result.norm_downstairs, result.certified, cfg)))
    lines.append(("norm-upstairs", _value_or_suppressed(result.norm_upstairs, result.certified, cfg)))
    lines.append(("equal", str(result.equal).lower()))
    lines.append(("certified", str(result.certified).lower()))
    lines.append(("note", ASPHERICITY_NOTE))
    return _emit(lines, cfg)


def _cmd_vanishing(args, cfg):
    X = _load_complex(args.complex)
    labeling = EdgeLabeling.parse(_read(args.labeling), X)
    group = _load_group(args.coeff)
    scheme = _load_scheme(X, cfg)
    c = _load_cochain(args.cochain, X, args.degree, group)
    result = vanishing_test(X, labeling, c, scheme=scheme)
    lines = _header("vanishing-test", cfg)
    lines.append(("fiber", str(result.fiber)))
    lines.append(("verdict", result.verdict))
    if result.primitive is not None and args.witness:
        lines.append(("primitive-support", str(len(result.primitive.values))))
    lines.append(("note", ASPHERICITY_NOTE))
    return _emit(lines, cfg)


def _cmd_lower_bound(args, cfg):
    X = _load_complex(args.complex)
    group = _load_group(args.coeff)
    scheme = _load_scheme(X, cfg)
    c = _load_cochain(args.cochain, X, args.degree, group)
    labelings = [EdgeLabeling.parse(_read(p), X) for p in args.labeling]
    report = lower_bound_report(
        X, c, labelings, scheme=scheme, budget=cfg.budget,
        heuristic=cfg.heuristic, seed=cfg.seed, workers=cfg.workers,
    )
    lines = _header("lower-bound", cfg) + report.lines()
    lines.append(("note", ASPHERICITY_NOTE))
    return _emit(lines, cfg)


def _cmd_sofic_report(args, cfg):
    pres = Presentation.parse(_read(args.presentation))
    hom = AlmostHom.parse(_read(args.hom))
    report = defect_report(hom, pres, word_length=cfg.word_length, budget=cfg.budget)
    return _emit(_header("sofic-report", cfg) + report.lines(), cfg)


def _cmd_induce(args, cfg):
    phi = ExtensionApproximation.parse(_read(args.extension))
    induced = induce_quotient(phi)
    lines = _header("induce", cfg)
    lines.append(("orbits", str(induced.hom.n)))
    lines.append(("ambiguity-rate", str(induced.ambiguity_rate)))
    for name in sorted(induced.hom.images):
        from . import perms

        lines.append((f"gen[{name}]", perms.to_one_line(induced.hom.images[name])))
    return _emit(lines, cfg)


def _cmd_defect_cocycle(args, cfg):
    phi = ExtensionApproximation.parse(_read(args.extension))
    cocycle = defect_cocycle(phi)
    lines = _header("defect-cocycle", cfg)
    lines.append(("section", " ".join(str(x + 1) for x in cocycle.section)))
    for name in sorted(cocycle.beta):
        values = " ".join(FiniteAbelianGroup.format_element(a) for a in cocycle.beta[name])
        lines.append((f"beta[{name}]", values))
    return _emit(lines, cfg)


def _cmd_compare_alpha(args, cfg):
    phi = ExtensionApproximation.parse(_read(args.extension))
    spec = CentralExtensionSpec.parse(_read(args.spec))
    report = compare_delta_beta(phi, spec)
    return _emit(_header("compare-alpha", cfg) + report.lines(), cfg)


def _cmd_afree_check(args, cfg):
    phi = ExtensionApproximation.parse(_read(args.extension))
    spec = CentralExtensionSpec.parse(_read(args.spec))
    cert = afree_vanishing_check(phi, spec)
    lines = _header("afree-check", cfg)
    lines.append(("verdict", cert.verdict))
    lines.append(("verified", str(cert.verified).lower()))
    if cert.primitive is not None:
        for g in sorted(cert.primitive):
            vals = " ".join(FiniteAbelianGroup.format_element(a) for a in cert.primitive[g])
            lines.append((f"primitive[{g}]", vals))
    return _emit(lines, cfg)


def _cmd_stability(args, cfg):
    phi = AlmostHom.parse(_read(args.hom))
    candidates = [AlmostHom.parse(_read(p)) for p in args.candidate]
    blocks = []
    for part in args.partition.split("|"):
        blocks.append([int(tok) - 1 for tok in part.split()])
    words = [w for w in args.words.split(",") if w]
    result = stability_match(
        phi, blocks, candidates, words, Fraction(args.epsilon),
        budget=cfg.budget, seed=cfg.seed,
    )
    return _emit(_header("stability-check", cfg) + result.lines(), cfg)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cosystole",
        description="weighted cochain complexes, expansion constants, covers, sofic experiments",
    )
    parser.add_argument("--version", action="version", version=f"cosystole {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("generate", help="emit a corpus complex in the complex file format")
    p.add_argument("--family", required=True,
                   choices=("complete", "cycle", "flag", "torus", "octahedron", "random"))
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--p", type=float, default=0.5)
    _add_common(p)
    p.set_defaults(handler=_cmd_generate)

    p = sub.add_parser("analyze-complex", help="cell counts, weights, degree bound")
    p.add_argument("--complex", required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser("cosystole", help="minimum class norm over nonzero classes")
    p.add_argument("--complex", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--coeff", required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_cosystole)

    p = sub.add_parser("expansion", help="expansion constant or expander checks")
    p.add_argument("--complex", required=True)
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--coeff", required=True)
    p.add_argument("--check", choices=("cosystolic", "coboundary"), default=None)
    p.add_argument("--target", default="0")
    _add_common(p)
    p.set_defaults(handler=_cmd_expansion)

    p = sub.add_parser("km-hypotheses", help="per-link checklist with spectral proxy")
    p.add_argument("--complex", required=True)
    p.add_argument("--coeff", required=True)
    p.add_argument("--beta", default="1/10")
    p.add_argument("--mu", default="0.99")
    _add_common(p)
    p.set_defaults(handler=_cmd_km)

    p = sub.add_parser("spectrum", help="upper Laplacian spectrum in one degree")
    p.add_argument("--complex", required=True)
    p.add_argument("--degree", type=int, required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_spectrum)

    p = sub.add_parser("build-cover", help="build the cover of an edge labeling")
    p.add_argument("--complex", required=True)
    p.add_argument("--labeling", required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_build_cover)

    p = sub.add_parser("pushforward", help="theta-pushforward of a cocycle")
    p.add_argument("--complex", required=True)
    p.add_argument("--labeling", required=True)
    p.add_argument("--cochain", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--coeff", required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_pushforward)

    p = sub.add_parser("shapiro-check", help="compare class norms downstairs and upstairs")
    p.add_argument("--complex", required=True)
    p.add_argument("--labeling", required=True)
    p.add_argument("--cochain", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--coeff", required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_shapiro)

    p = sub.add_parser("vanishing-test", help="does the pulled-back class die on the cover")
    p.add_argument("--complex", required=True)
    p.add_argument("--labeling", required=True)
    p.add_argument("--cochain", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--coeff", required=True)
    p.add_argument("--witness", action="store_true")
    _add_common(p)
    p.set_defaults(handler=_cmd_vanishing)

    p = sub.add_parser("lower-bound", help="pushforward norms over supplied actions")
    p.add_argument("--complex", required=True)
    p.add_argument("--cochain", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--coeff", required=True)
    p.add_argument("--labeling", action="append", required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_lower_bound)

    p = sub.add_parser("sofic-report", help="relator defects and freeness scores")
    p.add_argument("--presentation", required=True)
    p.add_argument("--hom", required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_sofic_report)

    p = sub.add_parser("induce", help="induced quotient action on central orbits")
    p.add_argument("--extension", required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_induce)

    p = sub.add_parser("defect-cocycle", help="transversal displacement tables")
    p.add_argument("--extension", required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_defect_cocycle)

    p = sub.add_parser("compare-alpha", help="agreement of the beta-sums with alpha'")
    p.add_argument("--extension", required=True)
    p.add_argument("--spec", required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_compare_alpha)

    p = sub.add_parser("afree-check", help="solve for a primitive of the pushed cocycle")
    p.add_argument("--extension", required=True)
    p.add_argument("--spec", required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_afree_check)

    p = sub.add_parser("stability-check", help="match partition statistics in finite actions")
    p.add_argument("--hom", required=True)
    p.add_argument("--partition", required=True, help="blocks of 1-based points, | separated")
    p.add_argument("--candidate", action="append", required=True)
    p.add_argument("--words", required=True, help="comma-separated words")
    p.add_argument("--epsilon", default="1/10")
    _add_common(p)
    p.set_defaults(handler=_cmd_stability)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return args.handler(args, cfg)
    except CapacityError as exc:
        sys.stderr.write(f"capacity error: {exc}\n")
        return EXIT_CAPACITY
    except CosystoleError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
