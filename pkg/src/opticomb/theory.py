"""Theory files: plain-text descriptions of a backend and its generators.

A theory file is line oriented.  Blank lines and ``#`` comments are
skipped.  The first meaningful line picks the backend kind:

    backend matrix semiring=complex tolerance=1e-9
    backend finfun
    backend free-commutative object=a endo=f
    backend free-pointed object=a states=phi,psi effects=bang
    backend unitary tolerance=1e-9

Then, depending on the kind:

    object x dim=2            # matrix, unitary
    object s size=3           # finfun
    morphism h : x -> x = [[[0.707,0],[0.707,0]],[[0.707,0],[-0.707,0]]]
    morphism f : s -> t = [0, 2, 1]
    rule phi ; bang -> 1      # free-pointed collapse pairs
    rule f ; f -> f           # free-commutative, must name the endo

Matrix entries are JSON.  A complex matrix is written with every entry a
two-element ``[re, im]`` list; an array of plain numbers is read as real.
Function morphisms are the list of output indices.  Free backends carry
their generators implicitly, so they take no morphism lines.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .core import ObjectWord
from .backends import (
    FinFunBackend,
    IdempotentFreeBackend,
    MatrixBackend,
    PointedFreeBackend,
    UnitaryBackend,
)

KINDS = ("matrix", "finfun", "free-commutative", "free-pointed", "unitary")


class TheoryError(Exception):
    """Raised when a theory file cannot be parsed."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


@dataclass
class TheoryConfig:
    kind: str
    options: dict[str, str] = field(default_factory=dict)
    objects: list[tuple[str, int]] = field(default_factory=list)
    morphisms: list[tuple[str, str, str, Any]] = field(default_factory=list)
    rules: list[tuple[str, str, str]] = field(default_factory=list)


def _split_options(parts: list[str], line_no: int) -> dict[str, str]:
    opts: dict[str, str] = {}
    for part in parts:
        if "=" not in part:
            raise TheoryError(f"expected key=value, got {part!r}", line_no)
        key, _, value = part.partition("=")
        opts[key.strip()] = value.strip()
    return opts


def parse_theory(text: str) -> TheoryConfig:
    config: TheoryConfig | None = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "backend":
            if config is not None:
                raise TheoryError("backend declared twice", line_no)
            parts = rest.split()
            if not parts or parts[0] not in KINDS:
                raise TheoryError(
                    f"backend kind must be one of {', '.join(KINDS)}", line_no
                )
            config = TheoryConfig(parts[0], _split_options(parts[1:], line_no))
            continue
        if config is None:
            raise TheoryError("the first declaration must be a backend line", line_no)
        if head == "object":
            parts = rest.split()
            if len(parts) != 2:
                raise TheoryError("object takes a name and dim=N or size=N", line_no)
            name = parts[0]
            opts = _split_options(parts[1:], line_no)
            key = "dim" if config.kind in ("matrix", "unitary") else "size"
            if set(opts) != {key}:
                raise TheoryError(f"object for {config.kind} takes {key}=N", line_no)
            try:
                extent = int(opts[key])
            except ValueError:
                raise TheoryError(f"{key} must be an integer", line_no) from None
            if extent < 0:
                raise TheoryError(f"{key} must be nonnegative", line_no)
            config.objects.append((name, extent))
        elif head == "morphism":
            if "=" not in rest or ":" not in rest:
                raise TheoryError(
                    "morphism syntax: name : word -> word = literal", line_no
                )
            sig, _, literal = rest.partition("=")
            name, _, arrow = sig.partition(":")
            if "->" not in arrow:
                raise TheoryError("morphism boundary needs ->", line_no)
            dom, _, cod = arrow.partition("->")
            try:
                value = json.loads(literal.strip())
            except json.JSONDecodeError as exc:
                raise TheoryError(f"bad literal: {exc}", line_no) from None
            config.morphisms.append((name.strip(), dom.strip(), cod.strip(), value))
        elif head == "rule":
            if "->" not in rest:
                raise TheoryError("rule syntax: g1 ; g2 -> rhs", line_no)
            lhs, _, rhs = rest.partition("->")
            if ";" not in lhs:
                raise TheoryError("rule left side must be g1 ; g2", line_no)
            g1, _, g2 = lhs.partition(";")
            config.rules.append((g1.strip(), g2.strip(), rhs.strip()))
        else:
            raise TheoryError(f"unknown declaration {head!r}", line_no)
    if config is None:
        raise TheoryError("empty theory: no backend line")
    return config


def _complex_entries(value: Any) -> Any:
    """Rebuild a JSON matrix literal as complex rows.

    Entries are two-element ``[re, im]`` lists; plain numbers are taken as
    real.  Mixing the two inside one matrix is allowed.
    """
    if isinstance(value, list) and value and all(
        isinstance(row, list) for row in value
    ):
        def entry(e: Any) -> complex:
            if isinstance(e, list):
                if len(e) != 2:
                    raise TheoryError(f"complex entry must be [re, im]: {e!r}")
                return complex(float(e[0]), float(e[1]))
            return complex(float(e), 0.0)

        return [[entry(e) for e in row] for row in value]
    raise TheoryError(f"matrix literal must be a list of rows: {value!r}")


def _rational_entries(value: Any) -> Any:
    def entry(e: Any) -> Fraction:
        if isinstance(e, str):
            return Fraction(e)
        if isinstance(e, int):
            return Fraction(e)
        raise TheoryError(f"rational entries are integers or 'p/q' strings: {e!r}")

    return [[entry(e) for e in row] for row in value]


def build_backend(config: TheoryConfig):
    """Turn a parsed theory into a live backend."""
    kind = config.kind
    opts = dict(config.options)
    if kind in ("free-commutative", "free-pointed"):
        if config.objects:
            raise TheoryError(f"{kind} backends carry a fixed object")
        if config.morphisms:
            raise TheoryError(f"{kind} generators are built in")
    if kind == "free-commutative":
        obj = opts.pop("object", "a")
        endo = opts.pop("endo", "f")
        if opts:
            raise TheoryError(f"unknown options {sorted(opts)} for {kind}")
        for g1, g2, rhs in config.rules:
            if (g1, g2, rhs) != (endo, endo, endo):
                raise TheoryError(
                    f"the only rule available is {endo} ; {endo} -> {endo}"
                )
        return IdempotentFreeBackend(object_name=obj, endo_name=endo)
    if kind == "free-pointed":
        obj = opts.pop("object", "a")
        states = tuple(s for s in opts.pop("states", "phi,psi").split(",") if s)
        effects = tuple(e for e in opts.pop("effects", "bang").split(",") if e)
        if opts:
            raise TheoryError(f"unknown options {sorted(opts)} for {kind}")
        rules = None
        if config.rules:
            pairs = []
            for g1, g2, rhs in config.rules:
                if rhs != "1":
                    raise TheoryError("pointed rules collapse to 1")
                pairs.append((g1, g2))
            rules = tuple(pairs)
        return PointedFreeBackend(
            object_name=obj, states=states, effects=effects, rules=rules
        )
    tolerance = float(opts.pop("tolerance", "1e-9"))
    if kind == "finfun":
        if opts:
            raise TheoryError(f"unknown options {sorted(opts)} for finfun")
        if config.rules:
            raise TheoryError("finfun theories take no rules")
        backend = FinFunBackend({name: size for name, size in config.objects})
        for name, dom, cod, value in config.morphisms:
            if not isinstance(value, list) or not all(
                isinstance(v, int) for v in value
            ):
                raise TheoryError(f"function {name} must be a list of indices")
            backend.add_generator(
                name, ObjectWord.parse(dom), ObjectWord.parse(cod), value
            )
        return backend
    if config.rules:
        raise TheoryError(f"{kind} theories take no rules")
    if kind == "unitary":
        if opts:
            raise TheoryError(f"unknown options {sorted(opts)} for unitary")
        backend = UnitaryBackend(
            {name: dim for name, dim in config.objects}, tolerance=tolerance
        )
        for name, dom, cod, value in config.morphisms:
            backend.add_generator(
                name, ObjectWord.parse(dom), ObjectWord.parse(cod),
                _complex_entries(value),
            )
        return backend
    semiring = opts.pop("semiring", "complex")
    if opts:
        raise TheoryError(f"unknown options {sorted(opts)} for matrix")
    backend = MatrixBackend(
        {name: dim for name, dim in config.objects},
        semiring=semiring,
        tolerance=tolerance,
    )
    for name, dom, cod, value in config.morphisms:
        if semiring == "complex":
            value = _complex_entries(value)
        elif semiring == "rational":
            value = _rational_entries(value)
        backend.add_generator(
            name, ObjectWord.parse(dom), ObjectWord.parse(cod), value
        )
    return backend


def load_theory(path: str):
    with open(path, encoding="utf-8") as handle:
        return build_backend(parse_theory(handle.read()))
