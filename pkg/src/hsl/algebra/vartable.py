"""Variable registries shared by polynomials and rational functions.

A :class:`VarTable` fixes the order of the exponent vector used by every
:class:`~hsl.algebra.laurent.LaurentPoly` built on it.  Tables are immutable;
combining values from two different tables re-embeds both into their union.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

#: Role tags.  ``mult`` variables live on a torus (y, x, z, q, s),
#: ``add`` variables are additive equivariant parameters (a, epsilon),
#: ``central`` marks the spectral variable X of the Coulomb operators.
ROLES = ("mult", "add", "aux", "central")


@dataclass(frozen=True)
class VarTable:
    names: tuple[str, ...]
    roles: tuple[str, ...] = ()
    _index: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        roles = self.roles or ("mult",) * len(self.names)
        if len(roles) != len(self.names):
            raise ValueError("one role per variable required")
        for r in roles:
            if r not in ROLES:
                raise ValueError(f"unknown role {r!r}")
        object.__setattr__(self, "roles", tuple(roles))
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    @classmethod
    def of(cls, *specs: str | tuple[str, str]) -> "VarTable":
        """Build a table from names or ``(name, role)`` pairs."""
        names, roles = [], []
        for s in specs:
            if isinstance(s, tuple):
                names.append(s[0])
                roles.append(s[1])
            else:
                names.append(s)
                roles.append(guess_role(s))
        return cls(tuple(names), tuple(roles))

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"variable {name!r} not in table {self.names}") from None

    def role(self, name: str) -> str:
        return self.roles[self.index(name)]

    def union(self, other: "VarTable") -> "VarTable":
        if self == other:
            return self
        names = list(self.names)
        roles = list(self.roles)
        for n, r in zip(other.names, other.roles):
            if n not in self._index:
                names.append(n)
                roles.append(r)
        return VarTable(tuple(names), tuple(roles))

    def extend(self, specs: Iterable[str | tuple[str, str]]) -> "VarTable":
        return self.union(VarTable.of(*specs))

    def without(self, *drop: str) -> "VarTable":
        keep = [(n, r) for n, r in zip(self.names, self.roles) if n not in drop]
        return VarTable(tuple(n for n, _ in keep), tuple(r for _, r in keep))

    def embedding(self, target: "VarTable") -> tuple[int, ...]:
        """Positions of this table's variables inside ``target``."""
        return tuple(target.index(n) for n in self.names)

    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.names)

    def unit(self, name: str, power: int = 1) -> tuple[int, ...]:
        e = [0] * len(self.names)
        e[self.index(name)] = power
        return tuple(e)


def guess_role(name: str) -> str:
    """Default role from the conventional symbol prefix."""
    head = name.rstrip("0123456789")
    if head in ("a", "eps"):
        return "add"
    if name == "X":
        return "central"
    return "mult"
