"""Line-oriented ``key: value`` ODE spec files (``*.ode``).

Recognised keys are ``name``, ``dep``, ``indep`` and ``equation``; any other
key is kept as metadata.  Lines starting with ``#`` are comments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, Union

from .jet import JetPoly, RationalJetExpr, clear_denominators
from .parsing import format_poly, parse_expr

MAX_ORDER = 4


class OdeFileError(ValueError):
    pass


@dataclass
class OdeSpec:
    name: str
    equation_text: str
    dep: str = "y"
    indep: str = "x"
    metadata: Dict[str, str] = field(default_factory=dict)

    def parse(self, text: str):
        return parse_expr(text, self.dep, self.indep)

    def equation(self) -> JetPoly:
        """The left-hand side as a polynomial (denominators cleared)."""
        e = self.parse(self.equation_text)
        if isinstance(e, RationalJetExpr):
            e = clear_denominators(e)[0]
        if e.is_zero:
            raise OdeFileError("equation is identically zero")
        if e.max_jet_order > MAX_ORDER:
            raise OdeFileError(f"equation order {e.max_jet_order} exceeds {MAX_ORDER}")
        return e

    @classmethod
    def from_poly(cls, name: str, poly: JetPoly, dep: str = "y", indep: str = "x", **metadata) -> "OdeSpec":
        return cls(name, format_poly(poly, dep, indep), dep, indep, dict(metadata))

    def dumps(self) -> str:
        lines = [f"name: {self.name}", f"dep: {self.dep}", f"indep: {self.indep}"]
        lines += [f"{k}: {v}" for k, v in self.metadata.items()]
        lines.append(f"equation: {self.equation_text}")
        return "\n".join(lines) + "\n"


def loads(text: str) -> OdeSpec:
    values: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise OdeFileError(f"line {lineno}: expected 'key: value'")
        key = key.strip()
        if key in values:
            raise OdeFileError(f"line {lineno}: duplicate key {key!r}")
        values[key] = value.strip()
    if "equation" not in values:
        raise OdeFileError("missing 'equation:' entry")
    spec = OdeSpec(
        name=values.pop("name", "unnamed"),
        equation_text=values.pop("equation"),
        dep=values.pop("dep", "y"),
        indep=values.pop("indep", "x"),
        metadata=values,
    )
    spec.equation()
    return spec


def load(path: Union[str, Path]) -> OdeSpec:
    return loads(Path(path).read_text())


def save(spec: OdeSpec, path: Union[str, Path]) -> None:
    Path(path).write_text(spec.dumps())


def fixture_path(name: str) -> Path:
    if not name.endswith(".ode"):
        name += ".ode"
    return Path(str(resources.files("painleve_forge") / "fixtures" / name))


def load_fixture(name: str) -> OdeSpec:
    """Load one of the shipped equations, e.g. ``load_fixture("chazy")``."""
    return load(fixture_path(name))
