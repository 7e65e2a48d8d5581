"""Command-line interface: ``lch <command> FRONT``.

Exit codes: 0 on success, 1 for invalid input, 2 when a verified identity
fails.
"""

from __future__ import annotations

import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import click

from .diagram import FrontDiagram, FrontError, classical_invariants, load_front, parse_front, resolve
from .dga import check_dga, differential, format_poly
from .disks import DEFAULT_MAX_DISKS, DiskLimitExceeded
from .duality import (
    SCHEMES,
    DualityError,
    build_copies,
    cap_product,
    duality_summary,
    eta_homology,
    extend_augmentation,
    fundamental_class,
    length_two,
    split_linearized,
)
from .linearize import AugmentationError, find_augmentations, linearize

EXIT_INVALID = 1
EXIT_VERIFY = 2


class VerificationFailure(RuntimeError):
    pass


def corpus_dir() -> Path:
    return Path(str(resources.files("lch") / "corpus"))


def read_front(spec: str) -> FrontDiagram:
    """A front from a file path, or the name of a bundled corpus file."""
    p = Path(spec)
    if p.is_file():
        return load_front(p)
    for cand in (corpus_dir() / p.name, corpus_dir() / f"{p.name}.front"):
        if cand.is_file():
            return load_front(cand)
    raise click.BadParameter(f"no front file {spec!r}", param_hint="FRONT")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


# -- reports ---------------------------------------------------------------------

def invariants_report(front: FrontDiagram) -> dict:
    ci = classical_invariants(front)
    r = resolve(front)
    out = r.to_json()
    out.update(name=front.name, front=front.to_text(), tb=ci.tb, rot=ci.rot)
    return out


def dga_report(front: FrontDiagram, max_disks: int) -> dict:
    d = differential(resolve(front), max_disks)
    rep = check_dga(d)
    if not rep.ok:
        raise VerificationFailure(f"DGA check failed: {rep}")
    return d.to_json()


def homology_report(front: FrontDiagram, max_disks: int) -> dict:
    d = differential(resolve(front), max_disks)
    augs = find_augmentations(d)
    lins = [linearize(d, a) for a in augs]
    polys = sorted({lin.polynomial for lin in lins}, key=lambda p: p.coeffs)
    return {
        "augmentations": [a.ids(d.generators) for a in augs],
        "polynomials": [p.to_json() for p in polys],
        "homology": [
            {
                "augmentation": lin.augmentation.ids(d.generators),
                "dims": {str(k): v for k, v in sorted(lin.homology.dims.items())},
                "representatives": {
                    str(k): [list(c) for c in reps] for k, reps in sorted(lin.homology.reps.items())
                },
            }
            for lin in lins
        ],
    }


def duality_report(front: FrontDiagram, n: int = 2, scheme: str = "canonical", max_disks: int = DEFAULT_MAX_DISKS) -> dict:
    """Run the duality pipeline for every augmentation; raises on failure."""
    r = resolve(front)
    if r.rot != 0:
        return {"rot": r.rot, "duality": None}
    copy = build_copies(r, n, scheme, max_disks)
    knot = differential(r, max_disks)
    results = []
    for aug in find_augmentations(knot):
        split = split_linearized(copy, extend_augmentation(copy, aug))
        eta = eta_homology(split, 1)
        rep = duality_summary(split)
        if not rep.holds:
            raise VerificationFailure("; ".join(rep.failures))
        lam = fundamental_class(split)
        entry = {
            "augmentation": aug.ids(knot.generators),
            "eta": {str(k): m.tolist() for k, m in sorted(eta.matrices.items())},
            "fundamental_class": list(lam.representative),
            "covers_cusps": lam.covers_cusps,
            "duality": {"holds": rep.holds, "h": [[k, v] for k, v in sorted(rep.h.items())]},
        }
        if n >= 3:
            cp = cap_product(split, length_two(split), lam)
            entry["cap"] = {"inverse_verified": cp.verified}
        else:
            entry["cap"] = None
        results.append(entry)
    classes = sorted({tuple(e["fundamental_class"]) for e in results})
    return {
        "rot": 0,
        "n": n,
        "scheme": scheme,
        "holds": all(e["duality"]["holds"] for e in results),
        "fundamental_classes": [list(c) for c in classes],
        "augmentations": results,
    }


@dataclass
class AtlasRecord:
    name: str
    front: str
    tb: int | None = None
    rot: int | None = None
    generators: int | None = None
    augmentations: int | None = None
    polynomials: list[str] = field(default_factory=list)
    duality: bool | None = None
    fundamental_class: str | None = None
    seconds: float | None = None
    error: str | None = None

    def to_json(self, timing: bool) -> dict:
        d = dict(self.__dict__)
        if not timing:
            d.pop("seconds")
        if self.rot != 0:
            d.pop("duality")
        return d


def atlas_record(path: Path, n: int, scheme: str, max_disks: int) -> AtlasRecord:
    t0 = time.perf_counter()
    rec = AtlasRecord(path.stem, "")
    try:
        front = load_front(path)
        rec.front = front.to_text()
        r = resolve(front)
        rec.tb, rec.rot = r.tb, r.rot
        d = differential(r, max_disks)
        rec.generators = len(d.generators)
        augs = find_augmentations(d)
        rec.augmentations = len(augs)
        rec.polynomials = sorted({str(linearize(d, a).polynomial) for a in augs})
        if r.rot == 0:
            rep = duality_report(front, n, scheme, max_disks)
            rec.duality = rep["holds"]
            rec.fundamental_class = " | ".join("+".join(c) for c in rep["fundamental_classes"])
    except (FrontError, DualityError, AugmentationError, VerificationFailure, DiskLimitExceeded, ValueError) as e:
        rec.error = f"{type(e).__name__}: {e}"
        if isinstance(e, (DualityError, VerificationFailure)):
            rec.duality = False
    rec.seconds = round(time.perf_counter() - t0, 3)
    return rec


def atlas(directory: Path, n: int = 2, scheme: str = "canonical", max_disks: int = DEFAULT_MAX_DISKS) -> list[AtlasRecord]:
    if not directory.is_dir():
        raise click.BadParameter(f"not a directory: {directory}", param_hint="DIR")
    return [atlas_record(p, n, scheme, max_disks) for p in sorted(directory.glob("*.front"))]


# -- commands -----------------------------------------------------------------------

def _run(fn):
    """Map exceptions onto exit codes."""
    try:
        return fn()
    except (DualityError, VerificationFailure) as e:
        click.echo(f"verification failed: {e}", err=True)
        sys.exit(EXIT_VERIFY)
    except AugmentationError as e:
        # a rejected augmentation here means the copy algebra is inconsistent
        click.echo(f"verification failed: {e}", err=True)
        sys.exit(EXIT_VERIFY)
    except (FrontError, DiskLimitExceeded, click.BadParameter, ValueError) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_INVALID)


json_opt = click.option("--json", "as_json", is_flag=True, help="Emit a JSON report.")
disks_opt = click.option("--max-disks", default=DEFAULT_MAX_DISKS, show_default=True, help="Disk count cap.")
n_opt = click.option("--n", "n", type=click.IntRange(2, 3), default=2, show_default=True, help="Number of copies.")
scheme_opt = click.option("--scheme", type=click.Choice(SCHEMES), default="canonical", show_default=True)


@click.group()
def main():
    """Legendrian contact homology of knots given by front diagrams."""


@main.command()
@click.argument("front")
@json_opt
def invariants(front, as_json):
    """Classical invariants and crossing gradings."""
    rep = _run(lambda: invariants_report(read_front(front)))
    if as_json:
        click.echo(_dump(rep))
        return
    click.echo(f"tb={rep['tb']} rot={rep['rot']}")
    for c in rep["crossings"]:
        click.echo(f"  {c['id']}: grading {c['grading']} ({c['source']})")


@main.command()
@click.argument("front")
@json_opt
@disks_opt
def dga(front, as_json, max_disks):
    """The Chekanov-Eliashberg differential."""
    rep = _run(lambda: dga_report(read_front(front), max_disks))
    if as_json:
        click.echo(_dump(rep))
        return
    for g in rep["generators"]:
        words = rep["boundary"][g["id"]]
        poly = format_poly(frozenset(tuple(w) for w in words))
        click.echo(f"|{g['id']}| = {g['grading']}   d{g['id']} = {poly}")


@main.command()
@click.argument("front")
@json_opt
@disks_opt
def augmentations(front, as_json, max_disks):
    """All augmentations."""
    def go():
        d = differential(resolve(read_front(front)), max_disks)
        return [a.ids(d.generators) for a in find_augmentations(d)]

    augs = _run(go)
    if as_json:
        click.echo(_dump({"augmentations": augs}))
        return
    click.echo(f"{len(augs)} augmentation(s)")
    for a in augs:
        click.echo("  {" + ", ".join(a) + "}")


@main.command()
@click.argument("front")
@json_opt
@disks_opt
def homology(front, as_json, max_disks):
    """Linearized homology and Poincare-Chekanov polynomials."""
    rep = _run(lambda: homology_report(read_front(front), max_disks))
    if as_json:
        click.echo(_dump(rep))
        return
    from .linearize import LaurentPoly

    polys = [str(LaurentPoly.from_dict({int(k): v for k, v in p.items()})) for p in rep["polynomials"]]
    click.echo("polynomials: {" + ", ".join(polys) + "}")
    for h in rep["homology"]:
        reps = "; ".join(
            f"H_{k}: " + ", ".join("[" + "+".join(c) + "]" for c in cs) for k, cs in h["representatives"].items()
        )
        click.echo("  {" + ", ".join(h["augmentation"]) + "}  " + reps)


@main.command()
@click.argument("front")
@json_opt
@disks_opt
@n_opt
@scheme_opt
def duality(front, as_json, max_disks, n, scheme):
    """Verify the duality theorem, the fundamental class and (n = 3) the cap product."""
    rep = _run(lambda: duality_report(read_front(front), n, scheme, max_disks))
    if as_json:
        click.echo(_dump(rep))
        return
    if rep["rot"] != 0:
        click.echo(f"rotation number {rep['rot']}: duality not checked")
        return
    classes = ", ".join("+".join(c) for c in rep["fundamental_classes"])
    click.echo(f"duality holds; fundamental class {classes}")
    if n >= 3:
        click.echo("cap product inverts eta on homology")


@main.command(name="atlas")
@click.argument("directory", type=click.Path(path_type=Path), required=False)
@click.option("--out", type=click.Path(path_type=Path), help="Write .json or .csv here.")
@click.option("--timing", is_flag=True, help="Include per-file timings.")
@json_opt
@disks_opt
@n_opt
@scheme_opt
def atlas_cmd(directory, out, timing, as_json, max_disks, n, scheme):
    """Run every front of a directory (the bundled corpus by default)."""
    directory = directory or corpus_dir()
    recs = _run(lambda: atlas(directory, n, scheme, max_disks))
    rows = [r.to_json(timing) for r in recs]
    if out is not None:
        if out.suffix == ".csv":
            buf = io.StringIO()
            keys = list(AtlasRecord.__dataclass_fields__)
            keys = [k for k in keys if timing or k != "seconds"]
            w = csv.DictWriter(buf, fieldnames=keys)
            w.writeheader()
            for row in rows:
                row = dict(row)
                row["polynomials"] = "; ".join(row["polynomials"])
                w.writerow(row)
            out.write_text(buf.getvalue(), encoding="utf-8")
        else:
            out.write_text(_dump(rows) + "\n", encoding="utf-8")
    if as_json:
        click.echo(_dump(rows))
    elif out is None:
        for r in recs:
            if r.error:
                click.echo(f"{r.name}: FAILED {r.error}")
                continue
            verdict = "-" if r.rot != 0 else ("holds" if r.duality else "FAILS")
            click.echo(
                f"{r.name}: tb={r.tb} rot={r.rot} gens={r.generators} augs={r.augmentations} "
                f"P={{{', '.join(r.polynomials)}}} duality={verdict} lambda={r.fundamental_class}"
                + (f" {r.seconds:.3f}s" if timing else "")
            )
    if any(r.duality is False for r in recs):
        sys.exit(EXIT_VERIFY)


if __name__ == "__main__":
    main()
