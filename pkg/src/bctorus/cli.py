"""Command line front end: classify forms, build and verify tori, export the EALA."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Mapping, Sequence

from .bitquad import BilForm, QuadForm, from_bits, isometry_classes, iso_set, pointed_orbits, radical
from .eala import export_structure_constants
from .hermitian import HermitianData, build_data, check_anisotropic
from .lietorus import (
    Slice,
    Window,
    centre_window_check,
    check_LT_axioms,
    check_support_lemmas,
    identity_suite,
    root_support_type,
)
from .report import Check, Report
from .torus import TorusSpec

DEFAULT_WINDOW = 2
DEFAULT_COUNT = 1000
SEED_ENV = "BCTORUS_SEED"


class SpecError(ValueError):
    """A job or spec file that cannot be used."""


# ------------------------------------------------------------------ input


def parse_form(doc: Any, n: int) -> QuadForm:
    """A quadratic form from a polynomial string or its JSON dict."""
    if isinstance(doc, str):
        return QuadForm.parse(doc, n)
    if isinstance(doc, Mapping):
        form = QuadForm.from_json(doc)
        if form.n != n:
            raise SpecError(f"form has dimension {form.n}, expected {n}")
        return form
    raise SpecError(f"cannot read a quadratic form from {doc!r}")


def parse_vector(v: Any, n: int) -> int:
    if isinstance(v, int):
        if not 0 <= v < (1 << n):
            raise SpecError(f"vector {v} does not fit in dimension {n}")
        return v
    if isinstance(v, list) and len(v) == n:
        return from_bits([int(x) % 2 for x in v])
    raise SpecError(f"cannot read a vector of Z_2^{n} from {v!r}")


def data_from_spec(doc: Mapping) -> HermitianData:
    """Spec files look like {"r": 3, "n": 3, "kappa": "l3 + l1 l2", "M": [[0,0,0], [1,0,0]]}.

    ``kappa_b`` may be given as a 0/1 matrix; otherwise the deterministic
    compatible form is used.  A serialized torus under ``"torus"`` may
    replace ``n``, ``kappa`` and ``kappa_b``.
    """
    try:
        r = int(doc["r"])
        if "torus" in doc:
            spec = TorusSpec.from_json(doc["torus"])
            n = spec.n
        else:
            n = int(doc["n"])
            kappa = parse_form(doc.get("kappa", "0"), n)
            kb = doc.get("kappa_b")
            spec = TorusSpec.from_form(kappa) if kb is None else TorusSpec(kappa, BilForm.from_json(kb))
        M = [parse_vector(v, n) for v in doc.get("M", [0])]
    except (KeyError, TypeError) as exc:
        raise SpecError(f"malformed spec: {exc}") from exc
    except ValueError as exc:
        raise SpecError(str(exc)) from exc
    try:
        return build_data(r, spec, M)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc


def read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: malformed JSON ({exc})") from exc


def write_json(doc: Any, path: str | Path | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def resolve_seed(seed: int) -> int:
    env = os.environ.get(SEED_ENV)
    return int(env) if env not in (None, "") else seed


# --------------------------------------------------------------- commands


def cmd_classify(n: int) -> dict:
    if not 1 <= n <= 4:
        raise SpecError("classify-forms supports 1 <= n <= 4")
    classes = []
    for idx, kappa in enumerate(isometry_classes(n)):
        orbits = pointed_orbits(kappa)
        classes.append({
            "index": idx,
            "kappa": str(kappa),
            "form": kappa.to_json(),
            "radical": radical(kappa),
            "iso": iso_set(kappa),
            "orbits": orbits,
        })
    return {"n": n, "classes": classes}


def cmd_orbits(n: int, kappa: QuadForm) -> dict:
    if kappa.n != n:
        raise SpecError(f"form has dimension {kappa.n}, expected {n}")
    return {"n": n, "kappa": str(kappa), "iso": iso_set(kappa), "orbits": pointed_orbits(kappa)}


def cmd_build_check(data: HermitianData, window: int = DEFAULT_WINDOW, seed: int = 0,
                    count: int = DEFAULT_COUNT) -> list[Report]:
    reports = [check_anisotropic(data), check_LT_axioms(data, window, seed=seed),
               check_support_lemmas(data, window)]
    centre = centre_window_check(data, min(window, 1))
    reports.append(Report("centre", [Check("windowed centre of S is zero", centre == 0,
                                           f"dimension {centre}")]))
    reports.append(identity_suite(data, count=count, seed=seed, w=window))
    return reports


def cmd_eala(data: HermitianData, window: int = 1) -> dict:
    return export_structure_constants(data, window)


def affine_signature(data: HermitianData, window: int = DEFAULT_WINDOW) -> dict:
    """Root-support pattern on the window: type, long root degrees, short root degrees."""
    sl = Slice(data, Window(window))
    long_deg = sorted({h for mu, h in sl.cells() if mu == (2,) + (0,) * (data.r - 1)})
    short_deg = sorted({h for mu, h in sl.cells() if mu == (1,) + (0,) * (data.r - 1)})
    return {"type": root_support_type(sl), "long": [list(h) for h in long_deg],
            "short": [list(h) for h in short_deg]}


# -------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bctorus", description=__doc__)
    p.add_argument("--seed", type=int, default=0, help=f"sampling seed (env {SEED_ENV} overrides)")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify-forms", help="isometry classes of forms with their pointed orbits")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--out")

    o = sub.add_parser("orbits", help="pointed orbits of subsets of iso(kappa)")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--kappa", required=True, help="JSON file holding a form or {\"kappa\": ...}")
    o.add_argument("--out")

    b = sub.add_parser("build", help="build the torus from a spec and optionally verify it")
    b.add_argument("--spec", required=True)
    b.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    b.add_argument("--check", action="store_true")
    b.add_argument("--count", type=int, default=DEFAULT_COUNT, help="instances per identity")
    b.add_argument("--out")

    e = sub.add_parser("eala", help="export EALA structure constants")
    e.add_argument("--spec", required=True)
    e.add_argument("--window", type=int, default=1)
    e.add_argument("--out", required=True)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    seed = resolve_seed(args.seed)
    try:
        if getattr(args, "window", 0) < 0:
            raise SpecError("window must be nonnegative")
        if args.command == "classify-forms":
            write_json(cmd_classify(args.n), args.out)
            return 0
        if args.command == "orbits":
            doc = read_json(args.kappa)
            form = doc["kappa"] if isinstance(doc, dict) and "kappa" in doc else doc
            write_json(cmd_orbits(args.n, parse_form(form, args.n)), args.out)
            return 0
        data = data_from_spec(read_json(args.spec))
        if args.command == "build":
            if not args.check:
                write_json({"data": data.to_json(), "signature": affine_signature(data, args.window)},
                           args.out)
                return 0
            reports = cmd_build_check(data, args.window, seed, args.count)
            for rep in reports:
                for line in rep.lines():
                    print(line)
            sig = affine_signature(data, args.window)
            print(f"root support type {sig['type']}")
            if args.out:
                write_json({"seed": seed, "reports": [r.to_json() for r in reports],
                            "signature": sig}, args.out)
            return 0 if all(reports) else 1
        if args.command == "eala":
            write_json(cmd_eala(data, args.window), args.out)
            return 0
    except (SpecError, OSError) as exc:
        print(f"bctorus: error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
