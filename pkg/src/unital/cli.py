"""Command-line front end. Every command prints one JSON document
{command, inputs, outputs, status} with sorted keys.

Exit codes: 0 ok, 2 usage error, 3 malformed input file, 4 parameter out of range.
"""
import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import birkhoff, covariant, extremal, figures, optimize, witness
from .channels import (
    ChoiState,
    affine_unitary_decomposition,
    hs_contraction_decomposition,
    is_cp,
    is_tp,
    is_unital,
    kraus_to_choi,
    superoperator,
)
from .io import FormatError, channel_from_json, load_json, matrix_to_json, square_matrix_from_json
from .linalg import is_psd, is_unitary

EXIT_OK, EXIT_USAGE, EXIT_FORMAT, EXIT_RANGE = 0, 2, 3, 4
CLAMP_TOL = 1e-3  # epsilon typed with a few digits may overshoot the range ends


class RangeError(ValueError):
    """Parameter outside the range a command accepts."""


@dataclass
class CommandResult:
    command: str
    inputs: dict
    outputs: dict = field(default_factory=dict)
    status: str = "ok"
    message: str | None = None
    exit_code: int = EXIT_OK

    def to_dict(self) -> dict:
        out = {"command": self.command, "inputs": self.inputs, "outputs": self.outputs, "status": self.status}
        if self.message is not None:
            out["message"] = self.message
        return out

    def to_json(self) -> str:
        return json.dumps(_plain(self.to_dict()), indent=2, sort_keys=True)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, Path):
        return str(obj)
    return obj


# -- helpers ---------------------------------------------------------------


def _load_channel(path):
    return channel_from_json(load_json(path))


def _load_matrix(path):
    return square_matrix_from_json(load_json(path))


def _clamp_epsilon(eps: float, d: int):
    hi = 2 / d
    if -CLAMP_TOL <= eps < 0:
        return 0.0, True
    if hi < eps <= hi + CLAMP_TOL:
        return hi, True
    if not 0 <= eps <= hi:
        raise RangeError(f"epsilon={eps} outside [0, {hi}] for d={d}")
    return eps, False


def _require_odd(d: int):
    if d < 3 or d % 2 == 0:
        raise RangeError(f"d must be odd and >= 3, got {d}")


def _covariant_state(args):
    if args.d < 2:
        raise RangeError("d must be at least 2")
    info = {}
    if args.epsilon is not None:
        _require_odd(args.d)
        eps, clamped = _clamp_epsilon(args.epsilon, args.d)
        info = {"epsilon": eps, "clamped": clamped}
        return covariant.covariant_family_state(args.d, eps), info
    qs = (args.q0, args.q1, args.q2)
    if any(q is None for q in qs):
        raise RangeError("give either --epsilon or all of --q0 --q1 --q2")
    st = covariant.CovariantState(args.d, *qs)
    if not st.is_state():
        raise RangeError("q0, q1, q2 must be non-negative and sum to one")
    return st, info


# -- commands --------------------------------------------------------------


def cmd_check(args):
    ch = _load_channel(args.channel)
    rho = kraus_to_choi(ch)
    return {"d": ch.d, "n_kraus": len(ch.kraus), "cp": is_cp(rho), "tp": is_tp(rho), "unital": is_unital(rho)}


def cmd_choi(args):
    ch = _load_channel(args.channel)
    rho = kraus_to_choi(ch).rho
    return {"d": ch.d, "choi": matrix_to_json(rho), "eigenvalues": np.linalg.eigvalsh(rho), "psd": is_psd(rho)}


def cmd_decompose(args):
    ch = _load_channel(args.channel)
    if not is_unital(ch):
        raise RangeError("channel is not unital")
    if args.kind == "hs":
        t = superoperator(ch)
        weights, (wp, wm) = hs_contraction_decomposition(t)
        return {
            "weights": weights,
            "w_plus": matrix_to_json(wp),
            "w_minus": matrix_to_json(wm),
            "residual": float(np.abs(0.5 * (wp + wm) - t).max()),
            "unitary": bool(is_unitary(wp, 1e-10) and is_unitary(wm, 1e-10)),
        }
    combo = affine_unitary_decomposition(ch, seed=args.seed)
    return {
        "coefficients": combo.coefficients,
        "coefficient_sum": float(np.sum(combo.coefficients)),
        "min_coefficient": float(np.min(combo.coefficients)),
        "unitaries": [matrix_to_json(u) for u in combo.unitaries],
        "residual": combo.residual,
    }


def cmd_extremal(args):
    if args.appendix_b:
        ch = extremal.example_channel()
        out = extremal.extremality_test(ch).to_dict()
        out["x_eigenvalues"] = np.linalg.eigvalsh(extremal.example_x())
        out["alpha"] = extremal.example_alpha()
        out["mu"] = list(extremal.example_mu())
        return out
    if args.channel is None:
        raise RangeError("give a channel file or --appendix-b")
    ch = _load_channel(args.channel)
    return extremal.extremality_test(ch, reduce=True).to_dict()


def cmd_witness(args):
    b = _load_matrix(args.b)
    wit = witness.flip_witness(b)
    out = {"d": wit.d, "w": wit.w, "singular_values": np.linalg.svd(b, compute_uv=False)}
    if args.rho is not None:
        rho = _load_matrix(args.rho)
        if rho.shape != wit.matrix.shape:
            raise FormatError(f"state is {rho.shape}, witness is {wit.matrix.shape}")
        val = witness.evaluate(wit, ChoiState.from_matrix(rho))
        out["value"] = val
        out["detects"] = val < -1e-9
    return out


def cmd_covariant(args):
    st, info = _covariant_state(args)
    c = st.coords
    out = dict(info, q=[st.q0, st.q1, st.q2], x=c.x, y=c.y)
    if args.kind == "membership":
        out["in_U"] = covariant.membership_in_U(c, args.d)
    elif args.kind == "negativity":
        out["negativity"] = covariant.negativity(st)
    return out


def cmd_birkhoff(args):
    if args.kind == "quaternion":
        if args.d not in (3, 5):
            raise RangeError("quaternion certificates exist for d = 3 and d = 5")
        return birkhoff.quaternion_certificate(args.d).to_dict()
    if args.epsilon is None:
        raise RangeError("--epsilon is required")
    if args.kind == "two-copy":
        eps, clamped = _clamp_epsilon(args.epsilon, 3)
        c = birkhoff.family_two_copy_coords(eps)
        return {
            "epsilon": eps,
            "clamped": clamped,
            "f": c.f,
            "f12": c.f12,
            "epsilon_star": birkhoff.epsilon_star(),
            "single_copy_in_U": eps <= 1e-12,
            "two_copies_in_U": birkhoff.two_copy_membership(c),
        }
    _require_odd(args.d)
    if args.D < 1:
        raise RangeError("D must be positive")
    eps, clamped = _clamp_epsilon(args.epsilon, args.d)
    return dict(birkhoff.depolarizing_verdict(args.d, args.D, eps), epsilon=eps, clamped=clamped)


def cmd_optimize(args):
    if args.d < 1 or (args.D is not None and args.D < 1) or args.restarts < 1:
        raise RangeError("dimensions and restarts must be positive")
    sigma = None
    if args.sigma is not None:
        try:
            sigma = sorted((float(s) for s in args.sigma.split(",")), reverse=True)
        except ValueError:
            raise RangeError(f"cannot parse --sigma {args.sigma!r}") from None
        if any(s < 0 for s in sigma):
            raise RangeError("singular values must be non-negative")
    obj = optimize.make_objective(args.objective, args.d, args.D, sigma)
    res = optimize.manifold_minimize(obj, restarts=args.restarts, seed=args.seed, max_iter=args.max_iter)
    out = res.to_dict()
    if sigma is not None:
        out["closed_form"] = optimize.min_tr_a_abar(sigma)[0] / len(sigma)
    return out


def cmd_figure(args):
    if args.d < 2:
        raise RangeError("d must be at least 2")
    if args.kind == "negativity":
        _require_odd(args.d)
    if args.kind == "two-copy" and args.d != 3:
        raise RangeError("the two-copy figure exists for d = 3 only")
    rows = figures.figure_rows(args.kind, args.d)
    text = figures.to_csv(args.kind, rows)
    Path(args.out).write_text(text)
    return {"path": str(args.out), "rows": len(rows), "header": list(figures.figure_header(args.kind))}


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unital", description="Unital channels versus mixtures of unitaries.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="CP / TP / unital report for a Kraus channel file")
    s.add_argument("channel")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("choi", help="Choi-Jamiolkowski state of a Kraus channel")
    s.add_argument("channel")
    s.set_defaults(func=cmd_choi)

    s = sub.add_parser(
        "decompose",
        help="unital channel as an average of two Hilbert-Schmidt unitaries (hs) "
        "or as an affine combination of unitary channels (affine)",
    )
    s.add_argument("kind", choices=["affine", "hs"])
    s.add_argument("channel")
    s.add_argument("--seed", type=int, required=True)
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser(
        "extremal",
        help="Gram-rank extremality tests; --appendix-b runs the d=3 unital-extremal example",
    )
    s.add_argument("channel", nargs="?")
    s.add_argument("--appendix-b", action="store_true", help="the d=3 four-Kraus example, extremal among unital channels only")
    s.set_defaults(func=cmd_extremal)

    s = sub.add_parser("witness", help="tight flip-operator separation witness built from B")
    s.add_argument("--b", required=True, help="matrix JSON for B")
    s.add_argument("--rho", help="matrix JSON for a Choi state to test")
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser(
        "covariant",
        help="O(d)-covariant channels: coordinates, membership in the unitary mixtures, closed-form negativity",
    )
    s.add_argument("kind", choices=["coords", "membership", "negativity"])
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--q0", type=float)
    s.add_argument("--q1", type=float)
    s.add_argument("--q2", type=float)
    s.add_argument("--epsilon", type=float, help="member of the odd-d family leaving the mixtures for epsilon > 0")
    s.set_defaults(func=cmd_covariant)

    s = sub.add_parser(
        "birkhoff",
        help="return to the unitary mixtures by two copies (two-copy), a depolarizing "
        "supplement (depolarizing) or the quaternion certificates (quaternion)",
    )
    s.add_argument("kind", choices=["two-copy", "depolarizing", "quaternion"])
    s.add_argument("--d", type=int, default=3)
    s.add_argument("--D", type=int, default=2)
    s.add_argument("--epsilon", type=float)
    s.set_defaults(func=cmd_birkhoff)

    s = sub.add_parser(
        "optimize",
        help="multi-start descent on the unitary group for min tr[U conj(U)^T2] and its relatives",
    )
    s.add_argument("--objective", choices=optimize.OBJECTIVES, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--D", type=int)
    s.add_argument("--sigma", help="comma-separated singular values for tr-a-abar")
    s.add_argument("--restarts", type=int, default=50)
    s.add_argument("--max-iter", type=int, default=5000)
    s.add_argument("--seed", type=int, required=True)
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("figure", help="CSV data for the covariant, negativity and two-copy pictures")
    s.add_argument("kind", choices=list(figures.FIGURES))
    s.add_argument("--d", type=int, default=3)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_figure)
    return p


def run(argv) -> CommandResult:
    """Parse and execute; usage errors raise SystemExit(2) from argparse."""
    args = build_parser().parse_args(argv)
    name = args.command + (f" {args.kind}" if hasattr(args, "kind") else "")
    inputs = {k: v for k, v in vars(args).items() if k not in ("func", "command")}
    result = CommandResult(name, inputs)
    try:
        result.outputs = args.func(args)
    except FormatError as exc:
        result.status, result.message, result.exit_code = "error", str(exc), EXIT_FORMAT
    except ValueError as exc:
        result.status, result.message, result.exit_code = "error", str(exc), EXIT_RANGE
    return result


def main(argv=None) -> int:
    result = run(sys.argv[1:] if argv is None else argv)
    print(result.to_json())
    if result.message:
        print(f"error: {result.message}", file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
