"""Finite probability spaces, sub-sigma-algebras as partitions, conditional
expectation, conditional essential sup/inf, and gluing along partitions.

All outcomes carry strictly positive probability, so almost-sure equality is
plain equality and no null-set bookkeeping is needed.  A sub-sigma-algebra of
the full power set is represented by the partition of outcome indices into its
atoms; a random variable is measurable w.r.t. it iff it is constant on every
atom.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractError, StructuralError

__all__ = [
    "FiniteProbSpace",
    "SubAlgebra",
    "RandomVar",
    "Filtration",
    "cond_expectation",
    "ess_sup_cond",
    "ess_inf_cond",
    "concatenate",
    "is_measurable",
]

_PROB_SUM_TOL = 1e-12


@dataclass(frozen=True)
class FiniteProbSpace:
    """Outcome probabilities of a finite sample space; the ambient algebra is
    the full power set."""

    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise StructuralError("probabilities must form a nonempty vector")
        if not np.all(probs > 0.0):
            raise StructuralError("every outcome probability must be strictly positive")
        if abs(float(probs.sum()) - 1.0) > _PROB_SUM_TOL:
            raise StructuralError(
                f"probabilities must sum to 1 within {_PROB_SUM_TOL}, got {probs.sum()!r}"
            )
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def n_outcomes(self) -> int:
        return self.probs.size

    @classmethod
    def uniform(cls, n: int) -> "FiniteProbSpace":
        return cls(np.full(n, 1.0 / n))

    def var(self, values) -> "RandomVar":
        """Random variable on this space from a value vector."""
        return RandomVar(np.asarray(values, dtype=float), self)

    def indicator(self, indices: Iterable[int]) -> "RandomVar":
        values = np.zeros(self.n_outcomes)
        values[list(indices)] = 1.0
        return RandomVar(values, self)


@dataclass(frozen=True)
class SubAlgebra:
    """A sub-sigma-algebra given by its atoms: disjoint nonempty index sets
    covering all outcomes."""

    atoms: tuple[tuple[int, ...], ...]
    n_outcomes: int

    def __post_init__(self):
        atoms = tuple(tuple(int(i) for i in atom) for atom in self.atoms)
        seen: set[int] = set()
        for atom in atoms:
            if not atom:
                raise StructuralError("atoms must be nonempty")
            if seen.intersection(atom):
                raise StructuralError("atoms must be pairwise disjoint")
            seen.update(atom)
        if seen != set(range(self.n_outcomes)):
            raise StructuralError("atoms must cover exactly the outcome indices 0..n-1")
        object.__setattr__(self, "atoms", atoms)
        atom_of = np.empty(self.n_outcomes, dtype=int)
        for k, atom in enumerate(atoms):
            atom_of[list(atom)] = k
        atom_of.setflags(write=False)
        object.__setattr__(self, "_atom_of", atom_of)

    @property
    def atom_of(self) -> np.ndarray:
        """Index of the atom containing each outcome."""
        return self._atom_of

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    @classmethod
    def from_atoms(cls, atoms: Sequence[Sequence[int]], n_outcomes: int | None = None) -> "SubAlgebra":
        if n_outcomes is None:
            n_outcomes = sum(len(a) for a in atoms)
        return cls(tuple(tuple(a) for a in atoms), n_outcomes)

    @classmethod
    def trivial(cls, n_outcomes: int) -> "SubAlgebra":
        return cls((tuple(range(n_outcomes)),), n_outcomes)

    @classmethod
    def discrete(cls, n_outcomes: int) -> "SubAlgebra":
        return cls(tuple((i,) for i in range(n_outcomes)), n_outcomes)

    def refines(self, coarser: "SubAlgebra") -> bool:
        """True iff every atom of self lies inside a single atom of `coarser`."""
        if self.n_outcomes != coarser.n_outcomes:
            return False
        for atom in self.atoms:
            if len({coarser.atom_of[i] for i in atom}) != 1:
                return False
        return True

    def broadcast(self, atom_values: Sequence[float]) -> np.ndarray:
        """Expand one value per atom into a full outcome vector."""
        atom_values = np.asarray(atom_values, dtype=float)
        if atom_values.size != self.n_atoms:
            raise StructuralError("need exactly one value per atom")
        return atom_values[self.atom_of]


@dataclass(frozen=True)
class RandomVar:
    """A real vector indexed by outcomes.  Values may be +/-inf where an
    operation's contract permits it; NaN never."""

    values: np.ndarray
    space: FiniteProbSpace

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size != self.space.n_outcomes:
            raise StructuralError(
                f"value vector has length {values.size}, space has {self.space.n_outcomes} outcomes"
            )
        if np.isnan(values).any():
            raise StructuralError("NaN is not a permitted value")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.values).all())

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, RandomVar):
            if other.space is not self.space and not np.array_equal(
                other.space.probs, self.space.probs
            ):
                raise StructuralError("random variables live on different spaces")
            return other.values
        return np.asarray(other, dtype=float)

    def __add__(self, other):
        return RandomVar(self.values + self._coerce(other), self.space)

    __radd__ = __add__

    def __sub__(self, other):
        return RandomVar(self.values - self._coerce(other), self.space)

    def __rsub__(self, other):
        return RandomVar(self._coerce(other) - self.values, self.space)

    def __mul__(self, other):
        return RandomVar(self.values * self._coerce(other), self.space)

    __rmul__ = __mul__

    def __neg__(self):
        return RandomVar(-self.values, self.space)

    def __abs__(self):
        return RandomVar(np.abs(self.values), self.space)


def _check_dims(x: RandomVar, alg: SubAlgebra):
    if alg.n_outcomes != x.space.n_outcomes:
        raise StructuralError(
            f"algebra indexes {alg.n_outcomes} outcomes, variable has {x.space.n_outcomes}"
        )


def cond_expectation(x: RandomVar, alg: SubAlgebra) -> RandomVar:
    """Conditional expectation of x given the algebra: on each atom A the
    probability-weighted average sum(p_w x_w) / P(A)."""
    _check_dims(x, alg)
    if not x.is_finite():
        raise ContractError("conditional expectation requires finite values")
    p = x.space.probs
    out = np.empty_like(x.values)
    for atom in alg.atoms:
        idx = list(atom)
        pa = p[idx]
        out[idx] = float(np.dot(pa, x.values[idx]) / pa.sum())
    return RandomVar(out, x.space)


def ess_sup_cond(x: RandomVar, alg: SubAlgebra) -> RandomVar:
    """Per-atom maximum of x, as a measurable variable of the algebra."""
    _check_dims(x, alg)
    out = np.empty_like(x.values)
    for atom in alg.atoms:
        idx = list(atom)
        out[idx] = np.max(x.values[idx])
    return RandomVar(out, x.space)


def ess_inf_cond(x: RandomVar, alg: SubAlgebra) -> RandomVar:
    """Per-atom minimum of x, as a measurable variable of the algebra."""
    _check_dims(x, alg)
    out = np.empty_like(x.values)
    for atom in alg.atoms:
        idx = list(atom)
        out[idx] = np.min(x.values[idx])
    return RandomVar(out, x.space)


def concatenate(pieces: Sequence[RandomVar], partition: SubAlgebra) -> RandomVar:
    """Glue one piece per atom of the partition: the result agrees with
    pieces[k] on atom k."""
    if len(pieces) != partition.n_atoms:
        raise StructuralError(
            f"got {len(pieces)} pieces for {partition.n_atoms} atoms"
        )
    space = pieces[0].space
    for piece in pieces:
        _check_dims(piece, partition)
    out = np.empty(partition.n_outcomes)
    for k, atom in enumerate(partition.atoms):
        idx = list(atom)
        out[idx] = pieces[k].values[idx]
    return RandomVar(out, space)


def is_measurable(x: RandomVar, alg: SubAlgebra) -> bool:
    """True iff x is constant on every atom (exact equality)."""
    _check_dims(x, alg)
    for atom in alg.atoms:
        idx = list(atom)
        first = x.values[idx[0]]
        if not np.all(x.values[idx] == first):
            return False
    return True


@dataclass(frozen=True)
class Filtration:
    """An increasing sequence of sub-sigma-algebras: each stage is refined by
    the next."""

    stages: tuple[SubAlgebra, ...]

    def __post_init__(self):
        stages = tuple(self.stages)
        if not stages:
            raise StructuralError("a filtration needs at least one stage")
        for t in range(len(stages) - 1):
            if not stages[t + 1].refines(stages[t]):
                raise StructuralError(
                    f"stage {t + 1} does not refine stage {t}"
                )
        object.__setattr__(self, "stages", stages)

    def __len__(self) -> int:
        return len(self.stages)

    def __getitem__(self, t: int) -> SubAlgebra:
        return self.stages[t]
