"""Declarative YAML input: named rings, modules, morphisms, complexes, jobs.

One document describes at most one graded polynomial ring (``ring``) and at
most one artinian complete intersection (``ci``), then named objects over
them.  Module and morphism definitions may reference other named objects;
resolution is lazy with cycle detection, so fixtures can be written in any
order.  All polynomial entries use the shared text syntax, e.g.
``3*x1^2*x2 + x3 - 1``.
"""

from __future__ import annotations

import numpy as np
import yaml

from .cibridge import (
    CIPresentation,
    FiniteComplexOverR,
    LambdaModule,
    build_ci,
    free_module as ci_free_module,
    monomial_quotient,
    syzygy_module,
    trivial_module,
)
from .dgmodules import (
    DGMorphism,
    FreeDGModule,
    cone,
    direct_sum,
    mult_morphism,
    shift,
    tensor,
    unit_module,
)
from .errors import InputError, ParseError
from .polynomials import Polynomial, PolynomialRing, graded_ring
from .support import realize


KNOWN_SECTIONS = (
    "ring",
    "ci",
    "modules",
    "morphisms",
    "ideals",
    "rmodules",
    "lambdamodules",
    "jobs",
)


def load_document(text: str) -> dict:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as ex:
        raise ParseError(f"not valid YAML: {ex}") from None
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ParseError("top level of the input must be a mapping")
    unknown = sorted(set(doc) - set(KNOWN_SECTIONS))
    if unknown:
        raise ParseError(
            f"unknown top-level sections {unknown}; expected a subset of "
            f"{list(KNOWN_SECTIONS)}"
        )
    return doc


def _as_str_list(value, what: str) -> list[str]:
    if not isinstance(value, list):
        raise ParseError(f"{what} must be a list")
    return [str(v) for v in value]


def _require(spec: dict, key: str, where: str):
    if not isinstance(spec, dict) or key not in spec:
        raise ParseError(f"{where} needs a {key!r} entry")
    return spec[key]


def _int_keyed(d: dict, what: str) -> dict[int, object]:
    out = {}
    for key, val in (d or {}).items():
        try:
            out[int(key)] = val
        except (TypeError, ValueError):
            raise ParseError(f"{what} keys must be integers, got {key!r}") from None
    return out


class Workspace:
    """Resolved view of one input document."""

    def __init__(self, doc: dict):
        self.doc = doc
        self._ring: PolynomialRing | None = None
        self._ci: CIPresentation | None = None
        self._modules: dict[str, FreeDGModule] = {}
        self._morphisms: dict[str, DGMorphism] = {}
        self._rmodules: dict[str, FiniteComplexOverR] = {}
        self._lambdamodules: dict[str, LambdaModule] = {}
        self._resolving: set[tuple[str, str]] = set()

    # -- rings -----------------------------------------------------------

    @property
    def ring(self) -> PolynomialRing:
        if self._ring is None:
            spec = self.doc.get("ring")
            if spec is None:
                raise InputError("this command needs a 'ring' section")
            p = int(_require(spec, "p", "ring"))
            r = int(spec.get("r", len(spec.get("degrees", [])) or 0))
            degrees = spec.get("degrees", 2)
            if isinstance(degrees, list):
                degrees = tuple(int(d) for d in degrees)
                r = r or len(degrees)
            names = spec.get("names")
            if names is not None:
                names = tuple(str(n) for n in names)
            if not r:
                raise InputError("ring needs 'r' or an explicit degree list")
            self._ring = graded_ring(p, r, degrees, names, e=int(spec.get("e", 1)))
        return self._ring

    @property
    def ci(self) -> CIPresentation:
        if self._ci is None:
            spec = self.doc.get("ci")
            if spec is None:
                raise InputError("this command needs a 'ci' section")
            exponents = _require(spec, "exponents", "ci")
            if not isinstance(exponents, list):
                raise ParseError("ci 'exponents' must be a list")
            constants = None
            if "constants" in spec:
                if not isinstance(spec["constants"], dict):
                    raise ParseError("ci 'constants' must be a mapping")
                constants = {}
                for key, text in spec["constants"].items():
                    try:
                        parts = [int(x) for x in str(key).split(",")]
                    except ValueError:
                        raise ParseError(f"constant key {key!r} must be 'h,i,j'") from None
                    if len(parts) != 3:
                        raise ParseError(f"constant key {key!r} must be 'h,i,j'")
                    h, i, j = (x - 1 for x in parts)
                    constants[(h, i, j)] = str(text)
            self._ci = build_ci(
                int(_require(spec, "p", "ci")), [int(e) for e in exponents], constants
            )
        return self._ci

    # -- named object resolution ------------------------------------------

    def _enter(self, kind: str, name: str):
        key = (kind, name)
        if key in self._resolving:
            raise InputError(f"circular definition of {kind} {name!r}")
        self._resolving.add(key)
        return key

    def poly(self, text: str) -> Polynomial:
        return Polynomial.parse(str(text), self.ring)

    def ideal(self, name: str) -> list[Polynomial]:
        section = self.doc.get("ideals", {})
        if name not in section:
            raise InputError(f"unknown ideal {name!r}")
        return [self.poly(s) for s in _as_str_list(section[name], f"ideal {name}")]

    def module(self, name: str) -> FreeDGModule:
        if name in self._modules:
            return self._modules[name]
        section = self.doc.get("modules", {})
        if name not in section:
            raise InputError(f"unknown module {name!r}")
        key = self._enter("module", name)
        try:
            mod = self._build_module(section[name], name)
        finally:
            self._resolving.discard(key)
        self._modules[name] = mod
        return mod

    def _build_module(self, spec, name: str) -> FreeDGModule:
        ring = self.ring
        if spec == "free":
            return unit_module(ring)
        if not isinstance(spec, dict):
            raise ParseError(f"module {name!r}: definition must be 'free' or a mapping")
        if "free" in spec:
            return unit_module(ring)
        if "realize" in spec:
            gens = [self.poly(s) for s in _as_str_list(spec["realize"], "realize")]
            return realize(gens, ring)
        if "shift" in spec:
            if not isinstance(spec["shift"], list) or len(spec["shift"]) != 2:
                raise ParseError(f"module {name!r}: shift takes [module, amount]")
            inner, s = spec["shift"]
            return shift(self.module(str(inner)), int(s))
        if "sum" in spec:
            parts = [self.module(str(x)) for x in spec["sum"]]
            out = parts[0]
            for part in parts[1:]:
                out = direct_sum(out, part)
            return out
        if "tensor" in spec:
            parts = [self.module(str(x)) for x in spec["tensor"]]
            out = parts[0]
            for part in parts[1:]:
                out = tensor(out, part)
            return out
        if "cone" in spec:
            return cone(self.morphism(str(spec["cone"])))
        if "generators" in spec:
            gen_list = spec["generators"]
            if not isinstance(gen_list, list) or not all(
                isinstance(g, list) and len(g) == 2 for g in gen_list
            ):
                raise ParseError(f"module {name!r}: generators must be [name, degree] pairs")
            gens = [(str(n), int(d)) for n, d in gen_list]
            rows = spec.get("differential")
            if rows is None:
                rows = [["0"] * len(gens) for _ in gens]
            if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
                raise ParseError(f"module {name!r}: differential must be a list of rows")
            matrix = [[self.poly(s) for s in row] for row in rows]
            return FreeDGModule(ring, gens, matrix)
        raise ParseError(f"module {name!r}: unrecognized definition {sorted(spec)}")

    def morphism(self, name: str) -> DGMorphism:
        if name in self._morphisms:
            return self._morphisms[name]
        section = self.doc.get("morphisms", {})
        if name not in section:
            raise InputError(f"unknown morphism {name!r}")
        key = self._enter("morphism", name)
        try:
            spec = section[name]
            if not isinstance(spec, dict):
                raise ParseError(f"morphism {name!r}: definition must be a mapping")
            if "mult" in spec:
                mor = mult_morphism(
                    self.poly(spec["mult"]),
                    self.module(str(_require(spec, "module", f"morphism {name!r}"))),
                )
            else:
                src = self.module(str(_require(spec, "source", f"morphism {name!r}")))
                tgt = self.module(str(_require(spec, "target", f"morphism {name!r}")))
                rows = _require(spec, "matrix", f"morphism {name!r}")
                if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
                    raise ParseError(f"morphism {name!r}: matrix must be a list of rows")
                matrix = [[self.poly(s) for s in row] for row in rows]
                mor = DGMorphism(src, tgt, matrix)
        finally:
            self._resolving.discard(key)
        self._morphisms[name] = mor
        return mor

    def rmodule(self, name: str) -> FiniteComplexOverR:
        if name in self._rmodules:
            return self._rmodules[name]
        section = self.doc.get("rmodules", {})
        if name not in section:
            raise InputError(f"unknown rmodule {name!r}")
        spec = section[name]
        R = self.ci
        if spec == "trivial":
            mod = trivial_module(R)
        elif spec == "free":
            mod = ci_free_module(R)
        elif spec == "syzygy":
            mod = syzygy_module(R)
        elif isinstance(spec, dict) and "quotient" in spec:
            monos = []
            for text in _as_str_list(spec["quotient"], "quotient"):
                poly = Polynomial.parse(text, R.zring)
                if len(poly.terms) != 1 or set(poly.terms.values()) != {1}:
                    raise ParseError(
                        f"rmodule {name!r}: quotient generators must be monomials"
                    )
                monos.append(next(iter(poly.terms)))
            mod = monomial_quotient(R, monos)
        elif isinstance(spec, dict) and "complex" in spec:
            mod = self._build_complex(spec["complex"], name)
        else:
            raise ParseError(f"rmodule {name!r}: unrecognized definition")
        problems = mod.validate()
        if problems:
            raise InputError(f"rmodule {name!r} invalid: {problems[0]}")
        self._rmodules[name] = mod
        return mod

    def _build_complex(self, spec: dict, name: str) -> FiniteComplexOverR:
        R = self.ci
        dims = {n: int(d) for n, d in _int_keyed(spec.get("dims", {}), "dims").items()}
        diff = {
            n: np.array(m, dtype=np.int64)
            for n, m in _int_keyed(spec.get("differential", {}), "differential").items()
        }
        z_ops = {}
        for zi, per_degree in (spec.get("z_actions") or {}).items():
            i = int(zi) - 1
            if not (0 <= i < R.r):
                raise ParseError(f"rmodule {name!r}: z index {zi} out of range")
            for n, m in _int_keyed(per_degree, "z_actions").items():
                z_ops[(i, n)] = np.array(m, dtype=np.int64)
        return FiniteComplexOverR(R, dims, diff, z_ops)

    def lambdamodule(self, name: str) -> LambdaModule:
        if name in self._lambdamodules:
            return self._lambdamodules[name]
        section = self.doc.get("lambdamodules", {})
        if name not in section:
            raise InputError(f"unknown lambdamodule {name!r}")
        spec = section[name]
        p = int(spec.get("p", self.doc.get("ci", {}).get("p", 0)) or 0)
        if not p:
            raise InputError(f"lambdamodule {name!r} needs 'p' (or a ci section)")
        r = int(spec["r"]) if "r" in spec else len(self.doc.get("ci", {}).get("exponents", []))
        if not r:
            raise InputError(f"lambdamodule {name!r} needs 'r' (or a ci section)")
        dims = {n: int(d) for n, d in _int_keyed(spec.get("dims", {}), "dims").items()}
        diff = {
            n: np.array(m, dtype=np.int64)
            for n, m in _int_keyed(spec.get("differential", {}), "differential").items()
        }
        xi_ops = {}
        for ji, per_degree in (spec.get("xi") or {}).items():
            j = int(ji) - 1
            if not (0 <= j < r):
                raise ParseError(f"lambdamodule {name!r}: xi index {ji} out of range")
            for n, m in _int_keyed(per_degree, "xi").items():
                xi_ops[(j, n)] = np.array(m, dtype=np.int64)
        mod = LambdaModule(p, r, dims, diff, xi_ops)
        problems = mod.validate()
        if problems:
            raise InputError(f"lambdamodule {name!r} invalid: {problems[0]}")
        self._lambdamodules[name] = mod
        return mod

    # -- enumeration for validate-all ---------------------------------------

    def object_names(self) -> list[tuple[str, str]]:
        out = []
        for kind in ("modules", "morphisms", "rmodules", "lambdamodules"):
            for name in self.doc.get(kind, {}) or {}:
                out.append((kind, str(name)))
        return out

    def jobs(self) -> list[dict]:
        jobs = self.doc.get("jobs", [])
        if not isinstance(jobs, list):
            raise ParseError("'jobs' must be a list")
        for j in jobs:
            if not isinstance(j, dict) or "command" not in j:
                raise ParseError(f"each job needs a 'command': {j!r}")
        return jobs


def serialize_module(m: FreeDGModule) -> dict:
    return {
        "generators": [[n, d] for n, d in m.generators],
        "differential": [[str(p) for p in row] for row in m.differential],
        "ring": {
            "p": m.ring.field.p,
            "e": m.ring.field.e,
            "names": list(m.ring.names),
            "degrees": list(m.ring.degrees),
        },
    }


def module_text(m: FreeDGModule) -> str:
    lines = [f"ring {m.ring}"]
    lines.append("generators " + " ".join(f"{n}:{d}" for n, d in m.generators))
    lines.append("differential")
    for row in m.differential:
        lines.append("  [" + ", ".join(str(p) for p in row) + "]")
    return "\n".join(lines) + "\n"
