"""Batch command-line front end: parse tower configs, run verification
suites, emit JSON/CSV reports.

Commands: `theta` (Stickelberger table over a lattice), `verify`
(tnorm | st-conversion | lemma-tx | bs | all), `lift` (solve a family file).
Reports are deterministic for fixed inputs; the wall time lives in its own
top-level field so the rest of the document is byte-stable. Exit status is 0
exactly when every check reports ok, 2 on configuration or validation errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass

from .bs_matrix import PlaceIndexedMatrix, build_u, kernel_check, ord_identity_check
from .euler_family import NormFamily, lift_family, verify_lift
from .fitting import lemma_tx_sweep, verify_lemma_tx
from .galois_data import (
    AbelianFieldQ,
    FieldLattice,
    build_field,
    max_conductor_bound,
    subfield_lattice,
)
from .group_ring import (
    FiniteAbelianGroup,
    MinusElement,
    MinusRing,
    StructuralError,
    UnsupportedError,
    Z,
)
from .lvalues import MethodDisagreement, check_st_conversion, check_tnorm, theta

VERIFY_SUITES = ("tnorm", "st-conversion", "lemma-tx", "bs", "all")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class TowerConfig:
    """Parsed tower description: a top field, an optional explicit member
    list, and the run parameters."""

    top: tuple | None = None               # (f, (h1, h2, ...))
    members: tuple = ()                    # explicit (f, H) pairs
    selector: str = "all-cm"               # "all-cm" | "explicit"
    p: int | None = None
    T: tuple = ()
    k: int | None = None
    order: tuple | None = None             # Sigma ordering, entries "oo" | int
    stage: int | None = None
    perturb: str | None = None

    def summary(self) -> dict:
        return {
            "field": None if self.top is None else {"f": self.top[0], "H": list(self.top[1])},
            "members": [{"f": f, "H": list(H)} for f, H in self.members],
            "selector": self.selector,
            "p": self.p,
            "T": list(self.T),
            "k": self.k,
            "order": None if self.order is None else [str(v) for v in self.order],
            "stage": self.stage,
            "perturb": self.perturb,
        }


def _parse_int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ConfigError(f"line {lineno}: malformed {what} '{token}'") from None


def _parse_field_spec(rest: str, lineno: int) -> tuple:
    f = None
    H: tuple = ()
    for token in rest.split():
        if "=" not in token:
            raise ConfigError(f"line {lineno}: expected key=value, got '{token}'")
        key, _, value = token.partition("=")
        if key == "f":
            f = _parse_int(value, lineno, "conductor")
        elif key == "H":
            H = tuple(
                _parse_int(t, lineno, "H generator")
                for t in value.split(",")
                if t != ""
            )
        else:
            raise ConfigError(f"line {lineno}: unknown field key '{key}'")
    if f is None:
        raise ConfigError(f"line {lineno}: field line needs f=<conductor>")
    return (f, H)


def parse_tower_config(text: str) -> TowerConfig:
    top = None
    members = []
    selector = None
    scalars: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(None, 1)[0]
        if head in ("field", "member"):
            spec = _parse_field_spec(line[len(head):], lineno)
            if head == "field":
                if top is not None:
                    raise ConfigError(f"line {lineno}: duplicate field line")
                top = spec
            else:
                members.append(spec)
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key in scalars or (key == "members" and selector is not None):
            raise ConfigError(f"line {lineno}: duplicate key '{key}'")
        if key == "p":
            scalars["p"] = _parse_int(value, lineno, "prime p")
        elif key == "T":
            scalars["T"] = tuple(
                _parse_int(t, lineno, "T prime") for t in value.split(",") if t != ""
            )
        elif key == "k":
            scalars["k"] = _parse_int(value, lineno, "precision k")
        elif key == "stage":
            scalars["stage"] = _parse_int(value, lineno, "stage index")
        elif key == "order":
            order = []
            for t in value.split(","):
                t = t.strip()
                if t == "":
                    continue
                order.append("oo" if t == "oo" else _parse_int(t, lineno, "order entry"))
            scalars["order"] = tuple(order)
        elif key == "members":
            if value not in ("all-cm", "explicit"):
                raise ConfigError(f"line {lineno}: members must be all-cm or explicit")
            selector = value
        elif key == "perturb":
            scalars["perturb"] = value
        else:
            raise ConfigError(f"line {lineno}: unknown key '{key}'")
    if selector is None:
        selector = "explicit" if members else "all-cm"
    if selector == "all-cm" and members:
        raise ConfigError("member lines require members = explicit")
    return TowerConfig(top=top, members=tuple(members), selector=selector, **scalars)


def load_tower_config(path: str) -> TowerConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_tower_config(fh.read())
    except OSError as ex:
        raise ConfigError(f"cannot read config {path}: {ex.strerror}") from None


# ---------------------------------------------------------------------------
# lattice resolution

def _build_member(f: int, H, what: str) -> AbelianFieldQ:
    E = build_field(f, H)
    bound = max_conductor_bound()
    if E.f > bound:
        raise ConfigError(
            f"{what} conductor f={E.f} exceeds ETNCKIT_MAX_CONDUCTOR={bound}"
        )
    if not E.is_cm:
        raise ConfigError(f"{what} f={E.f} H={sorted(E.H)} is not CM")
    return E


def _resolve(cfg: TowerConfig):
    """(top, lattice); lattice is None for an explicitly empty member list."""
    if cfg.top is None:
        raise ConfigError("config needs a field line")
    top = _build_member(*cfg.top, "field")
    if cfg.selector == "explicit":
        if not cfg.members:
            return top, None
        mems = [_build_member(*spec, "member") for spec in cfg.members]
        return top, FieldLattice(top, mems)
    return top, subfield_lattice(top)


def _require_p(cfg: TowerConfig) -> int:
    if cfg.p is None:
        raise ConfigError("config needs p = <prime>")
    return cfg.p


# ---------------------------------------------------------------------------
# commands

def cmd_theta(cfg: TowerConfig) -> list:
    top, lat = _resolve(cfg)
    checks = []
    for E in [] if lat is None else lat.members:
        name = f"theta f={E.f} deg={E.degree}"
        try:
            st = theta(E, T=cfg.T)
        except (MethodDisagreement, ArithmeticError, StructuralError) as ex:
            checks.append({"name": name, "status": "fail", "details": {"error": str(ex)}})
            continue
        checks.append(
            {
                "name": name,
                "status": "ok",
                "details": {
                    "f": E.f,
                    "H": sorted(E.H),
                    "degree": E.degree,
                    "dr_ok": st.dr_ok,
                    "integral": st.integral,
                    "warning": st.warning,
                    "minus": [str(c) for c in st.minus.coeffs],
                },
            }
        )
    return checks


def _verify_tnorm(cfg: TowerConfig) -> list:
    top, lat = _resolve(cfg)
    p = _require_p(cfg)
    checks = []
    edges = [] if lat is None else lat.edges()
    for idx, (sub, sup) in enumerate(edges):
        perturb = 1 if (cfg.perturb == "tnorm" and idx == 0) else 0
        rep = check_tnorm(sup, sub, p, cfg.T, top=lat.top, perturb=perturb)
        checks.append(
            {
                "name": f"tnorm f={sup.f}(deg {sup.degree})->f={sub.f}(deg {sub.degree})",
                "status": rep["status"],
                "details": rep,
            }
        )
    return checks


def _verify_st(cfg: TowerConfig) -> list:
    top, _ = _resolve(cfg)
    p = _require_p(cfg)
    return [
        {"name": rep["field"], "status": rep["status"], "details": rep}
        for rep in check_st_conversion(top, p, cfg.T)
    ]


def _verify_lemma(cfg: TowerConfig) -> list:
    groups: dict = {}
    for params, desc in lemma_tx_sweep():
        rep = verify_lemma_tx(params)
        key = (desc["e"], desc["q"])
        slot = groups.setdefault(key, {"count": 0, "failures": []})
        slot["count"] += 1
        if rep["status"] != "ok":
            slot["failures"].append(desc)
    checks = []
    for (e, q), slot in sorted(groups.items()):
        ok = not slot["failures"]
        details = {"realizations": slot["count"]}
        if not ok:
            details["failures"] = slot["failures"]
        checks.append(
            {
                "name": f"lemma-tx e={e} q={q}",
                "status": "ok" if ok else "fail",
                "details": details,
            }
        )
    return checks


_BS_GROUPS = (((2,), (1,)), ((4,), (2,)), ((8,), (4,)), ((2, 2), (0, 1)), ((6,), (3,)), ((2, 4), (1, 0)))


def _random_bs_instance(rng: random.Random):
    orders, c = _BS_GROUPS[rng.randrange(len(_BS_GROUPS))]
    mr = MinusRing(FiniteAbelianGroup(orders), c, Z)
    n = rng.randint(1, 4)
    kinds = ["split-prime"] + ["real" if rng.random() < 0.5 else "finite" for _ in range(n - 1)]
    rng.shuffle(kinds)
    labels = [{"place": f"v{j}", "kind": k} for j, k in enumerate(kinds)]
    matrix = []
    for _ in range(n):
        row = []
        for j in range(n):
            scale = 2 if kinds[j] == "real" else 1
            row.append(MinusElement(mr, [scale * rng.randint(-3, 3) for _ in range(mr.rank)]))
        matrix.append(row)
    t = rng.randint(0, kinds.count("real"))
    return PlaceIndexedMatrix(matrix, labels, t)


def _verify_bs(cfg: TowerConfig, instances: int = 50) -> list:
    rng = random.Random(823543)
    checks = []
    for idx in range(instances):
        A = _random_bs_instance(rng)
        u = build_u(A)
        ker = kernel_check(A, u)
        ordid = ord_identity_check(A, u)
        ok = ker["status"] == "ok" and ordid["status"] == "ok"
        checks.append(
            {
                "name": f"adjugate instance {idx:02d} (n={A.size}, G={A.parent.group.cyclic_orders})",
                "status": "ok" if ok else "fail",
                "details": {"kernel": ker["status"], "ord": ordid["status"], "t": A.t},
            }
        )
    # negative control: a fresh random column must not pair to zero
    mr = MinusRing(FiniteAbelianGroup((4,)), (2,), Z)
    A = PlaceIndexedMatrix(
        [[mr.one(), mr.zero()], [mr.zero(), mr.one().scalar(2)]],
        [{"place": "p", "kind": "split-prime"}, {"place": "oo1", "kind": "real"}],
        1,
    )
    u = build_u(A)
    fresh = [MinusElement(mr, [3, 1]), MinusElement(mr, [1, 4])]
    checks.append(
        {
            "name": "negative control: fresh column pairs nonzero",
            "status": "ok" if not u.pair(fresh).is_zero() else "fail",
            "details": {},
        }
    )
    # the Q(i) fixture: det(A) = Theta_{S,T}(Q(i)), t = 1, pairing = Theta
    K = build_field(4)
    st = theta(K, T=(3,))
    mz = st.minus.map_ring(Z)
    mrK = mz.parent
    A = PlaceIndexedMatrix(
        [[mrK.one(), mrK.zero()], [mrK.zero(), mz]],
        [{"place": "p", "kind": "split-prime"}, {"place": "oo1", "kind": "real"}],
        1,
    )
    uK = build_u(A)
    rep = ord_identity_check(A, uK, theta=mz)
    checks.append(
        {
            "name": "ord identity reproduces theta (Q(i), T=(3,), t=1)",
            "status": rep["status"],
            "details": {"theta": [str(c) for c in mz.coeffs]},
        }
    )
    return checks


def cmd_verify(cfg: TowerConfig, which: str) -> list:
    if which == "tnorm":
        return _verify_tnorm(cfg)
    if which == "st-conversion":
        return _verify_st(cfg)
    if which == "lemma-tx":
        return _verify_lemma(cfg)
    if which == "bs":
        return _verify_bs(cfg)
    return _verify_tnorm(cfg) + _verify_st(cfg) + _verify_lemma(cfg) + _verify_bs(cfg)


def cmd_lift(cfg: TowerConfig, family_path: str, precision: int | None) -> list:
    try:
        with open(family_path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as ex:
        raise ConfigError(f"cannot read family {family_path}: {ex.strerror}") from None
    except json.JSONDecodeError as ex:
        raise ConfigError(f"family {family_path}: invalid JSON ({ex.msg})") from None
    fam = NormFamily.from_json_dict(doc, T=cfg.T, order=cfg.order)
    k = precision if precision is not None else (cfg.k if cfg.k is not None else fam.k)
    if k < 1:
        raise ConfigError("precision k must be at least 1")
    stage = cfg.stage
    result = lift_family(fam, i=stage, k=k)
    checks = [
        {
            "name": "solve",
            "status": "ok",
            "details": dict(result.to_json_dict(), stage=result.stage, k=result.precision),
        }
    ]
    if result.status == "solved":
        checks.extend(verify_lift(fam, result.witness, result.stage, k)["checks"])
    return checks


# ---------------------------------------------------------------------------
# report plumbing

def make_report(command: str, inputs: dict, checks: list) -> dict:
    ok = all(c["status"] == "ok" for c in checks)
    return {
        "command": command,
        "inputs": inputs,
        "checks": checks,
        "status": "ok" if ok else "fail",
    }


def _theta_csv(checks: list) -> str:
    lines = ["f,H,degree,dr_ok,integral,warning,minus"]
    for c in checks:
        d = c["details"]
        if c["status"] != "ok":
            lines.append(f",,,,,,error: {d.get('error', '')}")
            continue
        lines.append(
            ",".join(
                [
                    str(d["f"]),
                    ";".join(str(h) for h in d["H"]),
                    str(d["degree"]),
                    str(d["dr_ok"]),
                    str(d["integral"]),
                    str(d["warning"]),
                    ";".join(d["minus"]),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="etnckit",
        description="Exact Stickelberger and group-ring verification suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="tower config file")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--precision", type=int, help="override precision k")
        p.add_argument("--jobs", type=int, default=1, help="worker bound (reserved)")

    common(sub.add_parser("theta", help="Stickelberger table over a lattice"))
    pv = sub.add_parser("verify", help="run an identity suite")
    pv.add_argument("which", choices=VERIFY_SUITES)
    common(pv)
    pl = sub.add_parser("lift", help="solve a norm-compatible family file")
    pl.add_argument("family", help="family JSON file")
    common(pl)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    started = time.monotonic()
    try:
        if args.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        if args.format == "csv" and args.command != "theta":
            raise ConfigError("csv output is the theta-table projection only")
        if args.config is not None:
            cfg = load_tower_config(args.config)
        elif args.command == "lift":
            cfg = TowerConfig()
        else:
            raise ConfigError("--config is required")
        inputs = {
            "config_path": args.config,
            "config": cfg.summary(),
            "format": args.format,
            "precision": args.precision,
            "jobs": args.jobs,
        }
        if args.command == "theta":
            checks = cmd_theta(cfg)
        elif args.command == "verify":
            inputs["which"] = args.which
            checks = cmd_verify(cfg, args.which)
        else:
            inputs["family"] = args.family
            checks = cmd_lift(cfg, args.family, args.precision)
    except (ConfigError, StructuralError, UnsupportedError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2
    report = make_report(args.command, inputs, checks)
    report["wall_time_s"] = round(time.monotonic() - started, 3)
    if args.format == "csv":
        _emit(_theta_csv(checks), args.out)
    else:
        _emit(json.dumps(report, indent=2) + "\n", args.out)
    return 0 if report["status"] == "ok" else 1
