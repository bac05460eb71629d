"""``thetamix`` command-line interface.

Exit codes: 0 success, 1 runtime or physics error (message on stderr),
2 usage error. ``--json`` prints one JSON document on stdout; otherwise an
aligned table. Inputs are Gaussian CGS unless ``--si`` is given.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .constants import (
    CONSTANT_SOURCES,
    DerivedConstants,
    PhysicalConstants,
    derive_all,
    derive_sigma,
    load_constants,
)
from .geosphere import (
    EARTH,
    OBSERVED_EARTH_DIPOLE_G_CM3,
    CelestialBody,
    fit_theta_from_field,
    load_body,
    magnetic_dipole,
    surface_field,
)
from .mixing import (
    ChargeEnergyPair,
    ChargeMassPair,
    boost_exact,
    boost_invariant,
    boost_linear,
    linear_vs_exact_residual,
)
from .nbody import load_run_config, simulate, total_energy
from .potential import (
    ParticleSpecies,
    coupling_primed,
    coupling_unprimed,
    potential_energy,
    radial_force,
)
from .units import CHARGE, ENERGY, LENGTH, MASS, Quantity, UnitsError, from_si, to_si

CONSTANTS_ENV = "THETAMIX_CONSTANTS"
SWEEP_TARGETS = ("sigma", "surface_field", "dipole")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # accept "-5e-10" as a value, not an option
        self._negative_number_matcher = re.compile(r"^-(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?$")

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# -- output helpers ---------------------------------------------------------


def _row(name: str, q, unit: str = "", note: str = "") -> dict:
    """One output record; Quantities get an SI column when one exists."""
    if isinstance(q, Quantity):
        rec = {"name": name, "value": q.value, "unit": unit or str(q.dim)}
        try:
            rec["si_value"], rec["si_unit"] = to_si(q)
        except UnitsError:
            pass
    else:
        rec = {"name": name, "value": q, "unit": unit}
    if note:
        rec["note"] = note
    return rec


def _fmt_val(v) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def _table(rows: list[dict], title: str | None = None) -> str:
    cols = ["name", "value", "unit", "si_value", "si_unit"]
    if any("note" in r for r in rows):
        cols.append("note")
    cells = [[_fmt_val(r.get(c, "")) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = []
    if title:
        lines.append(title)
    lines.append("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
    lines.append("  ".join("-" * w for w in widths))
    for row in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def _emit(args, payload: dict, sections: dict[str, list[dict]]) -> None:
    if args.json:
        doc = dict(payload)
        for name, rows in sections.items():
            doc[name] = {r["name"]: {k: v for k, v in r.items() if k != "name"} for r in rows}
        print(json.dumps(doc, indent=2, sort_keys=False))
    else:
        print("\n\n".join(_table(rows, title=name) for name, rows in sections.items()))


def _write_manifest(out_path: Path, command: str, inputs: dict, pc, outputs, t0) -> Path:
    manifest = {
        "command": command,
        "inputs": inputs,
        "constants_fingerprint": pc.fingerprint(),
        "outputs": [str(p) for p in outputs],
        "wall_time_s": time.perf_counter() - t0,
        "version": __version__,
    }
    path = out_path.with_name(out_path.name + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2) + "\n")
    return path


def _load_pc(args) -> PhysicalConstants:
    path = args.constants or os.environ.get(CONSTANTS_ENV) or None
    return load_constants(path)


def _body(args) -> CelestialBody:
    return load_body(args.body) if getattr(args, "body", None) else EARTH


# -- subcommands ----------------------------------------------------------


def cmd_constants(args) -> int:
    pc = _load_pc(args)
    dc = derive_all(pc)
    phys = [
        _row(name, getattr(pc, name), unit, note)
        for name, (_v, _d, unit, note) in CONSTANT_SOURCES.items()
    ]
    derived = [
        _row("ell", dc.ell, "cm"),
        _row("ell_over_L_p", dc.ell.value / pc.L_p.value, "1"),
        _row("kappa", dc.kappa, "cm^3 g^-1 s^-2"),
        _row("sqrt_kappa", dc.sqrt_kappa, "statC/g"),
        _row("sigma_per_theta", dc.sigma_per_theta, "statC/g"),
    ]
    payload = {"constants_fingerprint": pc.fingerprint()}
    _emit(args, payload, {"physical_constants": phys, "derived_constants": derived})
    return 0


def cmd_boost(args) -> int:
    pc = _load_pc(args)
    dc = derive_all(pc)
    E, Q = args.E, args.Q
    if args.si:
        E = from_si(E, "energy").value
        Q = from_si(Q, "charge").value
    s = ChargeEnergyPair(Quantity(E, ENERGY), Quantity(Q, CHARGE))
    out = boost_exact(s, args.theta, dc, pc)
    rows = [
        _row("E", s.E, "erg"),
        _row("Q", s.Q, "statC"),
        _row("E_prime", out.E, "erg"),
        _row("Q_prime", out.Q, "statC"),
        _row("invariant", boost_invariant(s, dc, pc), "erg^2"),
        _row("invariant_prime", boost_invariant(out, dc, pc), "erg^2"),
    ]
    sections = {"exact": rows}
    if args.linear:
        m, e = args.m, args.e
        if args.si:
            m = from_si(m, "mass").value
            e = from_si(e, "charge").value
        pair = ChargeMassPair(Quantity(m, MASS), Quantity(e, CHARGE))
        lin, deltas = boost_linear(pair, args.theta, dc)
        lrows = [
            _row("m", pair.m, "g"),
            _row("e", pair.e, "statC"),
            _row("m_prime", lin.m, "g"),
            _row("e_prime", lin.e, "statC"),
            _row("delta_m", deltas.delta_m, "g"),
            _row("delta_e", deltas.delta_e, "statC"),
        ]
        if m > 0:
            lrows.append(_row("linear_vs_exact_residual", linear_vs_exact_residual(pair, args.theta, dc, pc), "1"))
        sections["linear"] = lrows
    _emit(args, {"theta": args.theta}, sections)
    return 0


def cmd_potential(args) -> int:
    pc = _load_pc(args)
    dc = derive_all(pc)
    m1, e1, m2, e2, r = args.m1, args.e1, args.m2, args.e2, args.r
    if args.si:
        m1, m2 = from_si(m1, "mass").value, from_si(m2, "mass").value
        e1, e2 = from_si(e1, "charge").value, from_si(e2, "charge").value
        r = from_si(r, "length").value
    p1 = ParticleSpecies.cgs("1", m1, e1)
    p2 = ParticleSpecies.cgs("2", m2, e2)
    sigma = derive_sigma(dc, pc, args.theta)
    if args.primed:
        A = coupling_primed(p1, p2, args.theta, dc, pc)
    else:
        A = coupling_unprimed(p1, p2, sigma, pc)
    rq = Quantity(r, LENGTH)
    V = potential_energy(A, rq)
    F = radial_force(A, rq)
    rows = [
        _row("sigma", sigma, "statC/g"),
        _row("coupling_A", A.A, "erg cm"),
        _row("r", rq, "cm"),
        _row("potential_energy", V, "erg"),
        _row("radial_force", F, "dyn", "positive = repulsive"),
        _row("attractive", A.attractive),
    ]
    _emit(args, {"theta": args.theta, "form": "primed" if args.primed else "unprimed"}, {"potential": rows})
    return 0


def _fit_rows(body, fit, pc) -> list[dict]:
    mu = magnetic_dipole(body, fit.sigma, pc)
    return [
        _row("theta", fit.theta, "1"),
        _row("sigma", fit.sigma, "statC/g"),
        _row("Q_eff", fit.Q_eff, "statC"),
        _row("field_check", fit.field_check, "statV/cm"),
        _row("dipole", mu, "G cm^3"),
        _row(
            "dipole_ratio_to_observed",
            mu.value / OBSERVED_EARTH_DIPOLE_G_CM3,
            "1",
            f"observed Earth dipole {OBSERVED_EARTH_DIPOLE_G_CM3:g} G cm^3; comparison only",
        ),
    ]


def cmd_earth_fit(args) -> int:
    pc = _load_pc(args)
    dc = derive_all(pc)
    body = _body(args)
    target = from_si(args.field_v_per_m, "electric_field")
    fit = fit_theta_from_field(body, target, dc, pc)
    _emit(
        args,
        {"body": body.label, "target_field_v_per_m": args.field_v_per_m},
        {"earth_fit": _fit_rows(body, fit, pc)},
    )
    return 0


def cmd_dipole(args) -> int:
    pc = _load_pc(args)
    dc = derive_all(pc)
    body = _body(args)
    sigma = derive_sigma(dc, pc, args.theta)
    mu = magnetic_dipole(body, sigma, pc)
    rows = [
        _row("sigma", sigma, "statC/g"),
        _row("surface_field", surface_field(body, sigma), "statV/cm"),
        _row("dipole", mu, "G cm^3"),
        _row(
            "dipole_ratio_to_observed",
            mu.value / OBSERVED_EARTH_DIPOLE_G_CM3,
            "1",
            f"observed Earth dipole {OBSERVED_EARTH_DIPOLE_G_CM3:g} G cm^3; comparison only",
        ),
    ]
    _emit(args, {"body": body.label, "theta": args.theta}, {"dipole": rows})
    return 0


def sweep_values(
    theta_min: float,
    theta_max: float,
    n: int,
    target: str,
    body: CelestialBody,
    dc: DerivedConstants,
    pc: PhysicalConstants,
) -> list[tuple[float, float]]:
    """(theta, value) on a uniform grid including both endpoints."""
    if n < 2:
        raise UsageError("sweep: --n must be at least 2")
    if not theta_min < theta_max:
        raise UsageError("sweep: need theta_min < theta_max")
    if target not in SWEEP_TARGETS:
        raise UsageError(f"sweep: unknown target {target!r}")
    out = []
    for theta in np.linspace(theta_min, theta_max, n):
        theta = float(theta)
        sigma = derive_sigma(dc, pc, theta)
        if target == "sigma":
            val = sigma
        elif target == "surface_field":
            val = surface_field(body, sigma)
        else:
            val = magnetic_dipole(body, sigma, pc)
        out.append((theta, val.value))
    return out


SWEEP_COLUMNS = {
    "sigma": "sigma_statC_per_g",
    "surface_field": "surface_field_statV_per_cm",
    "dipole": "dipole_G_cm3",
}


def cmd_sweep(args) -> int:
    t0 = time.perf_counter()
    pc = _load_pc(args)
    dc = derive_all(pc)
    body = _body(args)
    rows = sweep_values(args.theta_min, args.theta_max, args.n, args.target, body, dc, pc)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", SWEEP_COLUMNS[args.target]])
    for theta, val in rows:
        w.writerow([format(theta, ".17g"), format(val, ".17g")])
    if args.json:
        print(json.dumps({"target": args.target, "body": body.label,
                          "rows": [{"theta": t, "value": v} for t, v in rows]}, indent=2))
    elif not args.out:
        sys.stdout.write(buf.getvalue())
    if args.out:
        out = Path(args.out)
        out.write_text(buf.getvalue())
        inputs = {k: getattr(args, k) for k in ("theta_min", "theta_max", "n", "target", "body")}
        _write_manifest(out, "sweep", inputs, pc, [out], t0)
    return 0


def cmd_simulate(args) -> int:
    t0 = time.perf_counter()
    pc = _load_pc(args)
    dc = derive_all(pc)
    state, cfg = load_run_config(args.config)
    out = Path(args.out)
    with open(out, "w", newline="") as fh:
        try:
            final = simulate(state, cfg, dc, pc, sink=fh)
        finally:
            fh.flush()
            _write_manifest(out, "simulate", {"config": str(args.config)}, pc, [out], t0)
    e0 = total_energy(state, cfg, dc, pc).total.value
    e1 = total_energy(final, cfg, dc, pc).total.value
    rows = [
        _row("steps", cfg.steps),
        _row("t_final", final.time, "s"),
        _row("energy_initial", Quantity(e0, ENERGY), "erg"),
        _row("energy_final", Quantity(e1, ENERGY), "erg"),
        _row("relative_energy_change", (e1 - e0) / abs(e0) if e0 else math.nan, "1"),
    ]
    _emit(args, {"out": str(out)}, {"simulate": rows})
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a single JSON document")
    common.add_argument(
        "--constants", metavar="PATH", help=f"JSON constants override (else ${CONSTANTS_ENV})"
    )
    body = argparse.ArgumentParser(add_help=False)
    body.add_argument("--body", metavar="JSON", help="body file (default: Earth)")

    p = _Parser(prog="thetamix", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("constants", parents=[common], help="print constant tables")
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("boost", parents=[common], help="exact (and linear) mixing of (E, Q)")
    sp.add_argument("--E", type=float, required=True, help="energy, erg")
    sp.add_argument("--Q", type=float, required=True, help="charge, statC")
    sp.add_argument("--theta", type=float, required=True)
    sp.add_argument("--linear", action="store_true", help="also apply the linearized (m, e) map")
    sp.add_argument("--m", type=float, default=0.0, help="mass, g (with --linear)")
    sp.add_argument("--e", type=float, default=0.0, help="charge, statC (with --linear)")
    sp.add_argument("--si", action="store_true", help="inputs in J, C, kg")
    sp.set_defaults(func=cmd_boost)

    sp = sub.add_parser("potential", parents=[common], help="two-body coupling, energy, force")
    for name, unit in (("m1", "g"), ("e1", "statC"), ("m2", "g"), ("e2", "statC")):
        sp.add_argument(f"--{name}", type=float, default=0.0, help=unit)
    sp.add_argument("--r", type=float, required=True, help="separation, cm")
    sp.add_argument("--theta", type=float, default=0.0)
    sp.add_argument("--primed", action="store_true", help="use observable (mixed) parameters")
    sp.add_argument("--si", action="store_true", help="inputs in kg, C, m")
    sp.set_defaults(func=cmd_potential)

    sp = sub.add_parser("earth-fit", parents=[common, body], help="fit theta to a surface field")
    sp.add_argument("--field-v-per-m", type=float, required=True, help="signed radial field, V/m")
    sp.set_defaults(func=cmd_earth_fit)

    sp = sub.add_parser("dipole", parents=[common, body], help="rotating-sphere dipole moment")
    sp.add_argument("--theta", type=float, required=True)
    sp.set_defaults(func=cmd_dipole)

    sp = sub.add_parser("sweep", parents=[common, body], help="tabulate a quantity over theta")
    sp.add_argument("--theta-min", type=float, required=True)
    sp.add_argument("--theta-max", type=float, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--target", choices=SWEEP_TARGETS, required=True)
    sp.add_argument("--out", metavar="CSV", help="write CSV here (plus a manifest)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("simulate", parents=[common], help="run the N-body integrator")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", required=True, metavar="CSV")
    sp.set_defaults(func=cmd_simulate)
    return p


def parse_and_dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        # ValueError covers the package error hierarchy and json decoding
        print(f"thetamix: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
