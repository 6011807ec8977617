"""Command line driver: validate actions, compute invariant chains,
extract certified fixed points, probe the representation bound.

Subcommands
    validate         certify an action and spot-check equivariance
    find-fixed       full pipeline: chain, fixed space, certified witness
    invariant-chain  per-depth invariant subspace table
    lemma-check      shifted-quotient growth probe
    gen-example      write a ready-to-run config for a bundled family

Configs are YAML with keys p, d, seed (a list of
{in: [comp, exp], out: [comp, exp], coeff: c} taps), and optional
label, precision, l_max, n_max, window ("lo:hi" or [lo, hi]) and
rng_seed.  Flags override config values.  Exit codes: 0 success,
1 validation failure, 2 soft window failure, 3 I/O or usage error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

import yaml

from .action import Action, ActionSpec, build_action, equivariance_check, generator_matrices
from .errors import (
    BudgetExceeded,
    ChainInvariantViolation,
    DimensionMismatch,
    EmptyFixedSpace,
    EquifixError,
    InsufficientPrecision,
    NonCommuting,
    NotOrderP,
    WindowTooNarrow,
)
from .fixpoint import (
    default_window,
    find_fixed_point,
    lemma_chain_from_action,
    m_ell_chain,
    window_b_image,
)
from .laurent import LatticeWindow, format_vector, random_series, random_vector
from .linalg import FpMatrix
from .oracle import brute_max_invariant
from .replab import dichotomy_probe
from .taps import SparsePerturbation, TapEntry, induced_matrix

DEFAULT_PRECISION = 4
DEFAULT_L_MAX = 3
DEFAULT_N_MAX = 3
EQUIVARIANCE_SAMPLES = 25

# Bundled families: name -> (label, p, d, taps as ((in_c, in_e), (out_c, out_e), coeff)).
EXAMPLES: dict[str, dict] = {
    "trivial": {"label": "trivial", "p": 2, "d": 1, "seed": []},
    "tap": {"label": "tap", "p": 2, "d": 2, "seed": [((1, 0), (2, 0), 1)]},
    "dropping-tap": {
        "label": "dropping-tap",
        "p": 2,
        "d": 2,
        "seed": [((1, 0), (2, -1), 1)],
    },
    "chain-3": {
        "label": "chain-3",
        "p": 3,
        "d": 3,
        "seed": [((1, 0), (2, 0), 1), ((2, 0), (3, 0), 1)],
    },
}

_TAP_SCHEMA = {
    "type": "object",
    "required": ["in", "out", "coeff"],
    "properties": {
        "in": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        "out": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        "coeff": {"type": "integer"},
    },
    "additionalProperties": False,
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "equifix run report",
    "type": "object",
    "required": ["schema", "command", "status", "action", "params", "result"],
    "properties": {
        "schema": {"const": 1},
        "command": {
            "enum": ["validate", "find-fixed", "invariant-chain", "lemma-check", "gen-example"]
        },
        "status": {"enum": ["ok", "validation-failure", "window-too-small"]},
        "reason": {"type": "string"},
        "action": {
            "type": "object",
            "required": ["p", "d", "label", "seed"],
            "properties": {
                "p": {"type": "integer"},
                "d": {"type": "integer"},
                "label": {"type": "string"},
                "seed": {"type": "array", "items": _TAP_SCHEMA},
            },
            "additionalProperties": False,
        },
        "params": {"type": "object"},
        "result": {"type": "object"},
    },
    "additionalProperties": False,
}


class _UsageError(Exception):
    """Anything that prevents a run from starting: I/O, YAML, bad args."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 3, not argparse's 2
        self.exit(3, f"{self.prog}: error: {message}\n")


def _window_arg(text: str):
    try:
        lo_s, hi_s = text.split(":")
        lo, hi = int(lo_s), int(hi_s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    if hi <= lo:
        raise argparse.ArgumentTypeError("window needs lo < hi")
    return (lo, hi)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="equifix", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", required=True, help="action config file (YAML)")
        sp.add_argument("--precision", type=int, default=None, help="series order t^N")
        sp.add_argument("--l-max", dest="l_max", type=int, default=None, help="chain depth")
        sp.add_argument(
            "--window",
            type=_window_arg,
            default=None,
            help="explicit window LO:HI (write --window=-3:4 for a negative floor)",
        )
        sp.add_argument("--json", default=None, help="write the JSON report to this path")
        sp.add_argument(
            "--seed", type=int, default=None, help="sampling seed (overrides config rng_seed)"
        )
        sp.add_argument(
            "--oracle",
            action="store_true",
            help="cross-check with the brute-force oracle where budgets permit",
        )

    sp = sub.add_parser("validate", help="certify an action config")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("find-fixed", help="compute a certified nonzero fixed vector")
    common(sp)
    sp.set_defaults(func=cmd_find_fixed)

    sp = sub.add_parser("invariant-chain", help="per-depth invariant subspace table")
    common(sp)
    sp.set_defaults(func=cmd_invariant_chain)

    sp = sub.add_parser("lemma-check", help="growth probe on the shifted quotient chain")
    common(sp)
    sp.add_argument("--n-max", dest="n_max", type=int, default=None, help="shift depth")
    sp.set_defaults(func=cmd_lemma_check)

    sp = sub.add_parser("gen-example", help="write a bundled family config")
    sp.add_argument("name", choices=sorted(EXAMPLES))
    sp.add_argument("--config", default=None, help="destination path (default: stdout)")
    sp.add_argument("--json", default=None, help="write the JSON report to this path")
    sp.set_defaults(func=cmd_gen_example)
    return parser


# ---------------------------------------------------------------------------
# config plumbing


def _load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read config {path}: {exc}")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise _UsageError(f"config {path} is not valid YAML: {exc}")
    if not isinstance(data, dict):
        raise _UsageError(f"config {path} must hold a mapping at the top level")
    return data


def _spec_from_data(data: dict) -> ActionSpec:
    """Build the action spec; structural mistakes surface as ValueError."""
    try:
        p = int(data["p"])
        d = int(data["d"])
        raw = data.get("seed") or []
        entries = []
        for item in raw:
            in_c, in_e = item["in"]
            out_c, out_e = item["out"]
            entries.append(
                TapEntry(int(in_c), int(in_e), int(out_c), int(out_e), int(item.get("coeff", 1)))
            )
        label = str(data.get("label", ""))
        seed = SparsePerturbation(p, d, entries)
        return ActionSpec(p=p, d=d, seed=seed, label=label)
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed action spec: {exc!r}")


def _action_dict(spec: ActionSpec) -> dict:
    return {
        "p": spec.p,
        "d": spec.d,
        "label": spec.label,
        "seed": [
            {
                "in": [e.in_comp, e.in_exp],
                "out": [e.out_comp, e.out_exp],
                "coeff": e.coeff,
            }
            for e in spec.seed.entries
        ],
    }


def _fallback_action_dict(data: dict) -> dict:
    def _int(key):
        try:
            return int(data.get(key, 0))
        except (TypeError, ValueError):
            return 0

    return {"p": _int("p"), "d": _int("d"), "label": str(data.get("label", "")), "seed": []}


def _resolve_params(args, data: dict) -> dict:
    def pick(flag_value, key, default):
        if flag_value is not None:
            return flag_value
        if key in data and data[key] is not None:
            return int(data[key])
        return default

    params = {
        "precision": pick(args.precision, "precision", DEFAULT_PRECISION),
        "l_max": pick(args.l_max, "l_max", DEFAULT_L_MAX),
        "rng_seed": pick(args.seed, "rng_seed", 0),
    }
    if hasattr(args, "n_max"):
        params["n_max"] = pick(args.n_max, "n_max", DEFAULT_N_MAX)
    window = args.window
    if window is None and data.get("window") is not None:
        raw = data["window"]
        try:
            if isinstance(raw, str):
                window = _window_arg(raw)
            else:
                lo, hi = raw
                window = (int(lo), int(hi))
                if hi <= lo:
                    raise ValueError
        except (TypeError, ValueError, argparse.ArgumentTypeError):
            raise ValueError(f"malformed window {raw!r} in config")
    params["window"] = window
    if params["precision"] < 1:
        raise ValueError("precision must be >= 1")
    if params["l_max"] < 0:
        raise ValueError("l_max must be >= 0")
    if params.get("n_max", 1) < 1:
        raise ValueError("n_max must be >= 1")
    return params


def _window_from_params(params: dict, a: Action) -> LatticeWindow | None:
    if params["window"] is None:
        return None
    lo, hi = params["window"]
    return LatticeWindow(lo, hi, a.d, a.p)


def _params_for_report(params: dict, w: LatticeWindow | None) -> dict:
    out = {k: v for k, v in params.items() if k != "window"}
    out["window"] = {"lo": w.lo, "hi": w.hi} if w is not None else None
    return out


# ---------------------------------------------------------------------------
# report plumbing


def _emit(args, command, status, action_dict, params, result, reason=None, human=()):
    for line in human:
        print(line)
    if getattr(args, "json", None):
        report = {
            "schema": 1,
            "command": command,
            "status": status,
            "action": action_dict,
            "params": params,
            "result": result,
        }
        if reason is not None:
            report["reason"] = reason
        Path(args.json).write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")


def _classify(exc: EquifixError) -> tuple[int, str, str]:
    """(exit code, report status, machine-readable reason) for a failure."""
    if isinstance(exc, NotOrderP):
        return 1, "validation-failure", "not-order-p"
    if isinstance(exc, NonCommuting):
        return 1, "validation-failure", "non-commuting"
    if isinstance(exc, ChainInvariantViolation):
        return 1, "validation-failure", "invariant-violation"
    if isinstance(exc, DimensionMismatch):
        return 1, "validation-failure", "parse-error"
    if isinstance(exc, EmptyFixedSpace):
        return 2, "window-too-small", "empty-fixed-space"
    if isinstance(exc, WindowTooNarrow):
        return 2, "window-too-small", "window-too-narrow"
    if isinstance(exc, InsufficientPrecision):
        return 2, "window-too-small", "insufficient-precision"
    raise exc


def _fail(args, command, action_dict, params_dict, exc) -> int:
    code, status, reason = _classify(exc)
    result = {"message": str(exc)}
    suggestion = getattr(exc, "suggestion", None)
    if suggestion:
        result["suggestion"] = suggestion
    witness_power = getattr(exc, "witness_power", None)
    if witness_power is not None:
        result["witness_power"] = witness_power
    offsets = getattr(exc, "offsets", None)
    if offsets is not None:
        result["offsets"] = list(offsets)
    print(f"{command}: {reason}: {exc}", file=sys.stderr)
    _emit(args, command, status, action_dict, params_dict, result, reason=reason)
    return code


def _prepare(args, command):
    """Shared front half of every pipeline command.

    Returns (action, params, action_dict) or an int exit code when the
    run already failed (after emitting the failure report).
    """
    data = _load_config(args.config)
    try:
        spec = _spec_from_data(data)
        params = _resolve_params(args, data)
    except (ValueError, DimensionMismatch) as exc:
        params_dict = {"window": None}
        print(f"{command}: parse-error: {exc}", file=sys.stderr)
        _emit(
            args,
            command,
            "validation-failure",
            _fallback_action_dict(data),
            params_dict,
            {"message": str(exc)},
            reason="parse-error",
        )
        return 1
    action_dict = _action_dict(spec)
    try:
        action = build_action(spec)
    except (NotOrderP, NonCommuting) as exc:
        return _fail(args, command, action_dict, _params_for_report(params, None), exc)
    return action, params, action_dict


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    prepared = _prepare(args, "validate")
    if isinstance(prepared, int):
        return prepared
    action, params, action_dict = prepared
    precision, l_max = params["precision"], params["l_max"]
    rng = random.Random(params["rng_seed"])
    x_prec = precision + action.drop + 1
    u_prec = precision + action.drop + max(0, action.max_in_exp) + 1
    samples = [
        (
            random_series(rng, action.p, prec=x_prec, min_val=-2),
            random_vector(rng, action.p, action.d, prec=u_prec, min_val=-2),
        )
        for _ in range(EQUIVARIANCE_SAMPLES)
    ]
    report_params = _params_for_report(params, None)
    try:
        eq = equivariance_check(action, samples, precision=precision)
    except EquifixError as exc:
        return _fail(args, "validate", action_dict, report_params, exc)
    trivial = action.seed.is_zero
    if trivial:
        table = []
    else:
        table = [
            [k, action.modulus.mu(k)]
            for k in range(-l_max, action.modulus.threshold(precision))
        ]
    result = {
        "trivial": trivial,
        "certificates": action.certificates(),
        "modulus": table,
        "equivariance": {"samples": len(samples), "ok": eq.ok},
    }
    human = [f"action {action.spec.label or '(unlabeled)'}: order-p and commutation certified"]
    if trivial:
        human.append("trivial action (empty seed): every vector is fixed")
    else:
        human.append(
            "modulus mu(k) = k + ({}) for k in [{}, {}):".format(
                action.modulus.min_out, -l_max, action.modulus.threshold(precision)
            )
        )
        human.extend(f"  mu({k}) = {mu}" for k, mu in table)
    human.append(f"equivariance holds on {len(samples)} samples: {eq.ok}")
    if args.oracle and not trivial:
        w = default_window(action, precision, l_max)
        g = induced_matrix(action.seed, w)
        match = g**action.p == FpMatrix.identity(action.p, w.dim)
        result["oracle"] = {"order_check": "match" if match else "mismatch"}
        human.append(f"oracle window-matrix order check: {'match' if match else 'MISMATCH'}")
        if not match:
            _emit(args, "validate", "validation-failure", action_dict, report_params, result,
                  reason="oracle-mismatch", human=human)
            return 1
    if not eq.ok:
        _emit(args, "validate", "validation-failure", action_dict, report_params, result,
              reason="equivariance-failure", human=human)
        return 1
    _emit(args, "validate", "ok", action_dict, report_params, result, human=human)
    return 0


def _oracle_m_hat_check(action: Action, chain) -> str:
    """'match' | 'mismatch' | 'skipped-budget' for the deepest member."""
    w = chain.window
    mats = [m for _, m in generator_matrices(action, chain.l_max, w)]
    try:
        brute = brute_max_invariant(action.p, w.dim, mats, ambient=window_b_image(w))
    except BudgetExceeded:
        return "skipped-budget"
    return "match" if brute == chain.m_hat else "mismatch"


def cmd_find_fixed(args) -> int:
    prepared = _prepare(args, "find-fixed")
    if isinstance(prepared, int):
        return prepared
    action, params, action_dict = prepared
    precision, l_max = params["precision"], params["l_max"]
    report_params = _params_for_report(params, None)
    try:
        window = _window_from_params(params, action)
        report_params = _params_for_report(params, window)
        chain, cert = find_fixed_point(action, precision, l_max, window)
    except EquifixError as exc:
        return _fail(args, "find-fixed", action_dict, report_params, exc)
    b_dim = window_b_image(chain.window).dim
    result = {
        "chain": chain.to_dict(),
        "certificate": cert.to_dict(),
        "m_hat_smaller_than_lattice": chain.m_hat.dim < b_dim,
    }
    human = [
        f"witness {format_vector(cert.witness)}",
        "certified against {} generator exponents, residuals all zero: {}".format(
            len(cert.checked_generators), all(z for _, z in cert.checked_generators)
        ),
        "window [{}, {}): m_hat dim {} of lattice-image dim {}{}".format(
            chain.window.lo,
            chain.window.hi,
            chain.m_hat.dim,
            b_dim,
            " (strictly smaller)" if chain.m_hat.dim < b_dim else "",
        ),
        f"witness in m_hat: {cert.in_m_hat}; outside t*m_hat: {cert.outside_t_m_hat}",
    ]
    if args.oracle:
        verdict = _oracle_m_hat_check(action, chain)
        result["oracle"] = {"m_hat_check": verdict}
        human.append(f"oracle m_hat check: {verdict}")
        if verdict == "mismatch":
            _emit(args, "find-fixed", "validation-failure", action_dict, report_params,
                  result, reason="oracle-mismatch", human=human)
            return 1
    if not cert.ok:
        _emit(args, "find-fixed", "validation-failure", action_dict, report_params, result,
              reason="certificate-failed", human=human)
        return 1
    _emit(args, "find-fixed", "ok", action_dict, report_params, result, human=human)
    return 0


def cmd_invariant_chain(args) -> int:
    prepared = _prepare(args, "invariant-chain")
    if isinstance(prepared, int):
        return prepared
    action, params, action_dict = prepared
    precision, l_max = params["precision"], params["l_max"]
    report_params = _params_for_report(params, None)
    try:
        window = _window_from_params(params, action)
        w = window if window is not None else default_window(action, precision, l_max)
        report_params = _params_for_report(params, w)
        chain = m_ell_chain(action, l_max, w)
    except EquifixError as exc:
        return _fail(args, "invariant-chain", action_dict, report_params, exc)
    rows = [
        {"ell": i, "dim": s.dim, "meets_shell": True, "nested": True}
        for i, s in enumerate(chain.subspaces)
    ]
    result = {"chain": chain.to_dict(), "rows": rows, "t_stable": True}
    human = [f"window [{w.lo}, {w.hi}), lattice-image dim {window_b_image(w).dim}"]
    human += [
        f"  ell {r['ell']}: dim {r['dim']}, meets shell: yes, nested: yes" for r in rows
    ]
    human.append(f"stable from ell = {chain.l_stable}; t*m_hat inside m_hat: yes")
    if args.oracle:
        verdict = _oracle_m_hat_check(action, chain)
        result["oracle"] = {"m_hat_check": verdict}
        human.append(f"oracle m_hat check: {verdict}")
        if verdict == "mismatch":
            _emit(args, "invariant-chain", "validation-failure", action_dict, report_params,
                  result, reason="oracle-mismatch", human=human)
            return 1
    _emit(args, "invariant-chain", "ok", action_dict, report_params, result, human=human)
    return 0


def cmd_lemma_check(args) -> int:
    prepared = _prepare(args, "lemma-check")
    if isinstance(prepared, int):
        return prepared
    action, params, action_dict = prepared
    precision, l_max, n_max = params["precision"], params["l_max"], params["n_max"]
    report_params = _params_for_report(params, None)
    try:
        window = _window_from_params(params, action)
        w = window if window is not None else default_window(action, precision, l_max, n_max=n_max)
        report_params = _params_for_report(params, w)
        chain = m_ell_chain(action, l_max, w)
        lemma = lemma_chain_from_action(action, chain, n_max)
        probe = dichotomy_probe(lemma.rep, lemma.nested)
    except EquifixError as exc:
        return _fail(args, "lemma-check", action_dict, report_params, exc)
    result = {"lemma": lemma.to_dict(), "probe": probe.to_dict()}
    human = [
        "quotient dim {} on window [{}, {}); {} acting generator(s)".format(
            lemma.space.dim, lemma.window.lo, lemma.window.hi, lemma.rep.r
        )
    ]
    human += [
        "  n={}: dim {}, fixed {}, quotient-fixed {}, bound {}, ok: {}".format(
            r.n, r.total_dim, r.fixed_dim, r.quotient_fixed_dim, r.lower_bound, r.ok
        )
        for r in probe.rows
    ]
    human.append(f"bound holds along the chain: {probe.ok}")
    if not probe.ok:
        _emit(args, "lemma-check", "validation-failure", action_dict, report_params, result,
              reason="bound-violated", human=human)
        return 1
    _emit(args, "lemma-check", "ok", action_dict, report_params, result, human=human)
    return 0


def _example_yaml(name: str) -> str:
    fam = EXAMPLES[name]
    lines = [
        f"# bundled action family: {name}",
        f"label: {fam['label']}",
        f"p: {fam['p']}",
        f"d: {fam['d']}",
    ]
    if fam["seed"]:
        lines.append("seed:")
        for (in_c, in_e), (out_c, out_e), coeff in fam["seed"]:
            lines.append(
                f"  - {{in: [{in_c}, {in_e}], out: [{out_c}, {out_e}], coeff: {coeff}}}"
            )
    else:
        lines.append("seed: []")
    lines += [
        f"precision: {DEFAULT_PRECISION}",
        f"l_max: {DEFAULT_L_MAX}",
        f"n_max: {DEFAULT_N_MAX}",
        "rng_seed: 0",
        "",
    ]
    return "\n".join(lines)


def cmd_gen_example(args) -> int:
    text = _example_yaml(args.name)
    human = []
    if args.config:
        try:
            Path(args.config).write_text(text)
        except OSError as exc:
            raise _UsageError(f"cannot write {args.config}: {exc}")
        human.append(f"wrote {args.config}")
    else:
        sys.stdout.write(text)
    fam = EXAMPLES[args.name]
    action_dict = {
        "p": fam["p"],
        "d": fam["d"],
        "label": fam["label"],
        "seed": [
            {"in": [ic, ie], "out": [oc, oe], "coeff": c}
            for (ic, ie), (oc, oe), c in fam["seed"]
        ],
    }
    _emit(
        args,
        "gen-example",
        "ok",
        action_dict,
        {"name": args.name, "window": None},
        {"config": text},
        human=human,
    )
    return 0


def console_main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"equifix: {exc}", file=sys.stderr)
        return 3


def main() -> None:  # convenience for `python -m equifix.cli`
    sys.exit(console_main())


if __name__ == "__main__":
    main()
