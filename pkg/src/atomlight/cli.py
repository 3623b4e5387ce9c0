"""Command-line front end.

Subcommands: rates, vep, wightman, hydrogen, boost-check.  stdout carries
the data artifact (JSON object, or RFC-4180 CSV for curve output); stderr
carries progress and, for CSV-to-stdout runs, the JSON run header.  With
--out BASE the artifact is written to BASE.json / BASE.csv and the report
figure to BASE.png.  Exit codes: 0 success, 2 validation error, 3
numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__, hydrogen, rates, vep, wightman
from .config import ConfigError, RunConfig, default_config, load_config
from .errors import DomainError, NumericalError
from .polarization import BoostParameters
from .quadrature import MonteCarloSpec
from .units import ChargeConvention, UnitSystem, standard_hydrogen

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _meta(cfg: RunConfig, units: UnitSystem, params) -> dict:
    return {
        "version": __version__,
        "units": units.as_dict(),
        "atom": params.as_dict(),
        "config": cfg.as_dict(),
    }


def _resolve(cfg: RunConfig, args) -> tuple[UnitSystem, "object"]:
    convention = getattr(args, "convention", None) or cfg.convention
    units = UnitSystem(ChargeConvention(convention))
    omega = getattr(args, "omega_ev", None)
    if omega is None:
        omega = cfg.omega_ev
    if omega is None:
        omega = 3.73 if convention == "paper" else 10.2
    a0 = getattr(args, "a0", None) or cfg.a0_ev_inv
    params = standard_hydrogen(omega=omega, a0=a0)
    return units, params


def _emit_json(payload: dict, out_base: str | None):
    text = json.dumps(payload, indent=2, default=_json_default)
    if out_base:
        with open(out_base + ".json", "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"wrote {out_base}.json", file=sys.stderr)
    else:
        print(text)


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _emit_csv(rows, header, meta, out_base):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    if out_base:
        with open(out_base + ".csv", "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
        with open(out_base + ".json", "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=2, default=_json_default)
            fh.write("\n")
        print(f"wrote {out_base}.csv and {out_base}.json", file=sys.stderr)
    else:
        # run header to stderr so stdout stays strict RFC-4180 CSV
        print(json.dumps(meta, default=_json_default), file=sys.stderr)
        sys.stdout.write(buf.getvalue())


def _parse_transition(label: str):
    if ":" not in label:
        raise DomainError("transition must look like '1s:2pz'")
    lo, hi = label.split(":", 1)
    return hydrogen.parse_orbital(lo), hydrogen.parse_orbital(hi)


def _pure(orbital, label):
    if len(orbital) != 1:
        raise DomainError(
            f"{label!r} is a superposition orbital; rates need a pure (n,l,m) state "
            "(use e.g. 2pz or 'n,l,m')"
        )
    return orbital[0][1]


def _cmd_rates(args, cfg: RunConfig) -> int:
    units, params = _resolve(cfg, args)
    lo, hi = _parse_transition(args.transition)
    a, b = _pure(lo, args.transition), _pure(hi, args.transition)
    sigma = args.sigma_p if args.sigma_p is not None else cfg.sigma_p_ev
    sigma_mc = args.sigma_p_mc if args.sigma_p_mc is not None else cfg.sigma_p_mc
    if sigma is not None and sigma_mc is not None:
        raise DomainError("give --sigma-p or --sigma-p-mc, not both")
    if sigma is None:
        sigma = (sigma_mc or 0.0) * params.M
    dist = rates.GaussianMomentumDistribution(sigma)
    gamma_0 = rates.base_rate(a, b, params, units)
    closed = rates.emission_rate_closed(dist, a, b, params, units)
    numeric = rates.emission_rate_numeric(dist, a, b, params, units)
    payload = {
        "meta": _meta(cfg, units, params),
        "transition": args.transition,
        "sigma_p_ev": sigma,
        "gamma_0": gamma_0,
        "gamma_closed": closed,
        "gamma_numeric": numeric,
        "correction_factor": closed / gamma_0,
        "units": "1/s",
    }
    kuv = args.kuv if args.kuv is not None else cfg.kuv_ev
    if kuv is not None:
        payload["self_energy_shift_ev"] = {
            str(q): rates.self_energy_shift(q, kuv, params, units) for q in (a, b)
        }
        payload["kuv_ev"] = kuv
    _emit_json(payload, args.out)
    return EXIT_OK


def _t_grid(spec: str):
    try:
        lo, hi, num = spec.split(":")
        lo, hi, num = float(lo), float(hi), int(num)
    except ValueError:
        raise DomainError("expected --T-range LO:HI:N") from None
    if not (0 < lo < hi and num >= 2):
        raise DomainError("need 0 < LO < HI and N >= 2 in --T-range")
    return np.geomspace(lo, hi, num)


def _cmd_vep(args, cfg: RunConfig) -> int:
    units, params = _resolve(cfg, args)
    meta = _meta(cfg, units, params)
    if args.T is not None:
        grid = np.array([args.T])
    elif args.T_range is not None:
        grid = _t_grid(args.T_range)
    else:
        raise DomainError("give --T or --T-range")
    if args.v > 0.0:
        mc = MonteCarloSpec(samples=args.samples or cfg.samples, seed=args.seed or cfg.seed)
        boost = BoostParameters(args.v)
        results = [
            vep.excitation_probability_boosted(float(t), boost, params, units, mc) for t in grid
        ]
        probs = np.array([r.probability for r in results])
        errs = np.array([r.error_estimate for r in results])
        meta["method"] = "boosted-mc"
        meta["mc"] = {"samples": mc.samples, "seed": mc.seed, "v": args.v}
    else:
        probs, errs = vep.excitation_probability_curve(grid, params, units)
        meta["method"] = "closed-radial"
    rows = [(f"{t:.12g}", f"{p:.12g}", f"{e:.3g}") for t, p, e in zip(grid, probs, errs)]
    _emit_csv(rows, ("T_ev_inv", "probability", "error"), meta, args.out)
    if args.out:
        from . import plotting

        plotting.save_vep_curve(
            args.out + ".png",
            grid,
            probs,
            errs,
            title=f"vacuum excitation, {meta['method']}, convention={units.charge_convention.value}",
        )
        print(f"wrote {args.out}.png", file=sys.stderr)
    return EXIT_OK


def _cmd_wightman(args, cfg: RunConfig) -> int:
    units, params = _resolve(cfg, args)
    pair = wightman.SpacetimePointPair(
        t1=args.t1, x1=_vec(args.x1), t2=args.t2, x2=_vec(args.x2)
    )
    if args.v > 0.0:
        tensor = wightman.boost_wightman(args.pairing, pair, BoostParameters(args.v))
        method = "boosted-closed"
    elif args.epsilon is not None:
        tensor = wightman.wightman_momentum(args.pairing, pair, args.epsilon)
        method = "momentum-regulated"
    else:
        tensor = wightman.wightman_closed(args.pairing, pair)
        method = "closed"
    payload = {
        "meta": _meta(cfg, units, params),
        "pairing": args.pairing,
        "method": method,
        "point_pair": {
            "t1": pair.t1,
            "x1": pair.x1.tolist(),
            "t2": pair.t2,
            "x2": pair.x2.tolist(),
        },
        "tensor_re": np.real(tensor).tolist(),
        "tensor_im": np.imag(tensor).tolist(),
    }
    _emit_json(payload, args.out)
    return EXIT_OK


def _vec(text: str) -> np.ndarray:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise DomainError(f"cannot parse 3-vector from {text!r}") from None
    if len(parts) != 3:
        raise DomainError("3-vector needs exactly three comma-separated numbers")
    return np.array(parts)


def _cmd_hydrogen(args, cfg: RunConfig) -> int:
    units, params = _resolve(cfg, args)
    lo, hi = _parse_transition(args.pair)
    payload = {"meta": _meta(cfg, units, params), "pair": args.pair}
    if args.action == "matrix-element":
        d = hydrogen.orbital_dipole_matrix_element(lo, hi, params)
        payload["dipole_re"] = np.real(d).tolist()
        payload["dipole_im"] = np.imag(d).tolist()
        payload["norm_squared_ev^-2"] = float(np.sum(np.abs(d) ** 2))
        payload["norm_squared_over_a0^2"] = float(np.sum(np.abs(d) ** 2)) / params.a0**2
    else:  # form-factor
        a, b = _pure(lo, args.pair), _pure(hi, args.pair)
        f = hydrogen.form_factor(a, b, _vec(args.k), params)
        payload["k_ev"] = _vec(args.k).tolist()
        payload["form_factor_re"] = np.real(f).tolist()
        payload["form_factor_im"] = np.imag(f).tolist()
    _emit_json(payload, args.out)
    return EXIT_OK


def _cmd_boost_check(args, cfg: RunConfig) -> int:
    units, params = _resolve(cfg, args)
    boost = BoostParameters(args.v)
    rest = vep.excitation_probability_closed(args.T, params, units)
    mc = MonteCarloSpec(samples=args.samples or cfg.samples, seed=args.seed or cfg.seed)
    boosted = vep.excitation_probability_boosted(args.T, boost, params, units, mc)
    pointwise = vep.boosted_integrand_comparison(args.T, boost, params, seed=mc.seed)
    sigma = boosted.error_estimate
    deviation = abs(boosted.probability - rest.probability)
    payload = {
        "meta": _meta(cfg, units, params),
        "T_ev_inv": args.T,
        "v": args.v,
        "rest_probability": rest.probability,
        "boosted_probability": boosted.probability,
        "mc_sigma": sigma,
        "mc_samples": mc.samples,
        "seed": mc.seed,
        "deviation_over_sigma": deviation / sigma if sigma > 0 else float("inf"),
        "within_3_sigma": bool(deviation <= 3.0 * sigma),
        "pointwise_max_rel_deviation": pointwise,
    }
    _emit_json(payload, args.out)
    if args.out:
        from . import plotting

        plotting.save_boost_comparison(
            args.out + ".png", rest.probability, boosted.probability, sigma, args.v
        )
        print(f"wrote {args.out}.png", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atomlight",
        description="Dipole-coupled atoms and the electromagnetic vacuum: "
        "emission rates, Wightman tensors, vacuum excitation probabilities.",
    )
    parser.add_argument("--config", help="key = value config file (or set ATOMLIGHT_CONFIG)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--convention", choices=["hl", "paper"], help="charge convention")
        p.add_argument("--omega-ev", dest="omega_ev", type=float, help="transition frequency [eV]")
        p.add_argument("--a0", type=float, help="Bohr radius override [1/eV]")
        p.add_argument("--out", help="output base path (writes .json/.csv and .png)")

    p = sub.add_parser("rates", help="spontaneous emission rates with COM corrections")
    common(p)
    p.add_argument("--transition", default="1s:2pz", help="pair like 1s:2pz")
    p.add_argument("--sigma-p", dest="sigma_p", type=float, help="momentum spread [eV]")
    p.add_argument(
        "--sigma-p-mc", dest="sigma_p_mc", type=float, help="momentum spread [units of M c]"
    )
    p.add_argument("--kuv", type=float, help="self-energy UV cutoff [eV]")
    p.set_defaults(func=_cmd_rates)

    p = sub.add_parser("vep", help="vacuum excitation probability curves")
    common(p)
    p.add_argument("--T", type=float, help="single switching timescale [1/eV]")
    p.add_argument("--T-range", dest="T_range", help="log grid LO:HI:N")
    p.add_argument("--v", type=float, default=0.0, help="boost speed (Monte Carlo route)")
    p.add_argument("--samples", type=int, help="MC samples (boosted route)")
    p.add_argument("--seed", type=int, help="MC seed")
    p.set_defaults(func=_cmd_vep)

    p = sub.add_parser("wightman", help="vacuum field two-point tensors")
    common(p)
    p.add_argument("--pairing", choices=["EE", "BB", "BE", "EB"], default="EE")
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--x1", required=True, help="comma-separated 3-vector [1/eV]")
    p.add_argument("--t2", type=float, required=True)
    p.add_argument("--x2", required=True, help="comma-separated 3-vector [1/eV]")
    p.add_argument("--epsilon", type=float, help="evaluate the regulated momentum form")
    p.add_argument("--v", type=float, default=0.0, help="boost speed (EE only)")
    p.set_defaults(func=_cmd_wightman)

    p = sub.add_parser("hydrogen", help="matrix elements and form factors")
    common(p)
    p.add_argument("action", choices=["matrix-element", "form-factor"])
    p.add_argument("--pair", default="1s:2pz", help="pair like 1s:2pz")
    p.add_argument("--k", default="0,0,0", help="wavevector for form-factor [eV]")
    p.set_defaults(func=_cmd_hydrogen)

    p = sub.add_parser("boost-check", help="Lorentz covariance check of the dipole model")
    common(p)
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_boost_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else default_config()
        return args.func(args, cfg)
    except (DomainError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
