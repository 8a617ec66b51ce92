"""Molecular Hamiltonian integrals: FCIDUMP parsing, symmetry handling, and
the adjusted one-body matrices used by the factorized representations.

Conventions
-----------
The two-electron tensor is stored in chemist notation, ``two_body[i, j, k, l]
= (ij|kl)`` in Hartree, with the full 8-fold permutational symmetry of real
orbitals:

    (ij|kl) = (ji|kl) = (ij|lk) = (ji|lk) = (kl|ij) = (kl|ji) = (lk|ij) = (lk|ji)

Indices are 0-based internally; FCIDUMP files are 1-based.
"""

from __future__ import annotations

import io
import re
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "AdjustedOneBody",
    "FcidumpError",
    "MolecularIntegrals",
    "SymmetryViolation",
    "adjusted_one_body",
    "canonical_orbit",
    "count_nonzero_after_truncation",
    "load_fcidump",
    "orbit_members",
    "parse_fcidump",
    "validate_symmetry",
    "write_fcidump",
]

#: Two duplicate FCIDUMP entries for the same orbit may differ by at most this
#: much before the file is rejected as self-contradictory.
DUPLICATE_TOLERANCE = 1e-10

#: Absolute tolerance for the symmetry validator.
SYMMETRY_TOLERANCE = 1e-10


class FcidumpError(ValueError):
    """Malformed FCIDUMP content.  Carries a 1-based line number when the
    problem is attributable to a specific line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class MolecularIntegrals:
    """One- and two-electron integrals of a molecular Hamiltonian.

    Attributes
    ----------
    n_orbitals : int
        Number of spatial orbitals N.
    n_electrons : int
        Electron count (from the NELEC header field).
    core_energy : float
        Scalar core/nuclear-repulsion energy in Hartree.
    one_body : (N, N) ndarray
        Symmetric one-electron integrals h_ij, Hartree.
    two_body : (N, N, N, N) ndarray
        Chemist-notation (ij|kl) tensor, Hartree, 8-fold symmetric.
    """

    n_orbitals: int
    n_electrons: int
    core_energy: float
    one_body: np.ndarray
    two_body: np.ndarray

    def __post_init__(self):
        n = self.n_orbitals
        if n <= 0:
            raise ValueError(f"n_orbitals must be positive, got {n}")
        if self.n_electrons < 0:
            raise ValueError(f"n_electrons must be non-negative, got {self.n_electrons}")
        if self.one_body.shape != (n, n):
            raise ValueError(f"one_body shape {self.one_body.shape} != ({n}, {n})")
        if self.two_body.shape != (n, n, n, n):
            raise ValueError(f"two_body shape {self.two_body.shape} != ({n},)*4")

    def __eq__(self, other) -> bool:
        if not isinstance(other, MolecularIntegrals):
            return NotImplemented
        return (
            self.n_orbitals == other.n_orbitals
            and self.n_electrons == other.n_electrons
            and self.core_energy == other.core_energy
            and np.array_equal(self.one_body, other.one_body)
            and np.array_equal(self.two_body, other.two_body)
        )

    def scaled(self, factor: float) -> "MolecularIntegrals":
        """All integrals (including the core energy) multiplied by ``factor``."""
        return MolecularIntegrals(
            self.n_orbitals,
            self.n_electrons,
            factor * self.core_energy,
            factor * self.one_body,
            factor * self.two_body,
        )


@dataclass(frozen=True)
class AdjustedOneBody:
    """One-body matrices entering the factorized Hamiltonian forms.

    ``h_tilde[i,j] = h_ij - 1/2 sum_l (il|lj)`` absorbs the exchange-like
    contraction of the two-electron tensor; ``l_minus1`` additionally absorbs
    the Coulomb-like contraction, ``l_minus1[i,j] = h_tilde[i,j] +
    sum_l (ll|ij)``; ``scalar_shift`` is the accompanying identity
    coefficient, ``sum_i h_ii - 1/2 sum_il (il|li) + 1/2 sum_il (ll|ii)``.
    ``core_energy`` is carried through from the source integrals so the
    factorized forms stay self-contained representations of the full
    Hamiltonian.
    """

    h_tilde: np.ndarray
    l_minus1: np.ndarray
    scalar_shift: float
    core_energy: float = 0.0


@dataclass(frozen=True)
class SymmetryViolation:
    """A broken integral symmetry: which relation, at which indices, by how much."""

    relation: str
    indices: tuple
    discrepancy: float

    def __str__(self):
        return f"{self.relation} at {self.indices}: |delta| = {self.discrepancy:.3e}"


def canonical_orbit(i: int, j: int, k: int, l: int) -> tuple[int, int, int, int]:
    """Canonical representative of the 8-fold orbit of (i, j, k, l):
    i >= j, k >= l, and (i, j) >= (k, l) lexicographically."""
    if i < j:
        i, j = j, i
    if k < l:
        k, l = l, k
    if (i, j) < (k, l):
        i, j, k, l = k, l, i, j
    return i, j, k, l


def orbit_members(i: int, j: int, k: int, l: int) -> set[tuple[int, int, int, int]]:
    """All index tuples related to (i, j, k, l) by the 8-fold symmetry."""
    return {
        (i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
        (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i),
    }


_HEADER_FIELD = re.compile(r"([A-Za-z0-9_]+)\s*=\s*([^=,]*?)(?=\s*(?:,|$|[A-Za-z0-9_]+\s*=))")


def _parse_header(lines: list[str]) -> tuple[int, int, int]:
    """Read the namelist header; returns (norb, nelec, first body line index)."""
    header_text = []
    end_idx = None
    for idx, raw in enumerate(lines):
        stripped = raw.strip()
        header_text.append(stripped)
        if "&END" in stripped.upper() or stripped.endswith("/") or stripped == "/":
            end_idx = idx
            break
    if end_idx is None:
        raise FcidumpError("namelist header is not terminated by &END or /")
    joined = " ".join(header_text)
    joined = joined.replace("&END", " ").replace("&end", " ").rstrip("/ ")
    joined = re.sub(r"&[A-Za-z]+", " ", joined)

    fields = {m.group(1).upper(): m.group(2).strip() for m in _HEADER_FIELD.finditer(joined)}
    if "NORB" not in fields:
        raise FcidumpError("header is missing NORB", line=1)
    if "NELEC" not in fields:
        raise FcidumpError("header is missing NELEC", line=1)
    try:
        norb = int(fields["NORB"].split(",")[0])
        nelec = int(fields["NELEC"].split(",")[0])
    except ValueError as exc:
        raise FcidumpError(f"non-integer NORB/NELEC: {exc}", line=1) from None
    # ORBSYM / ISYM / MS2 are accepted and ignored: no point-group symmetry here.
    return norb, nelec, end_idx + 1


def parse_fcidump(text) -> MolecularIntegrals:
    """Parse FCIDUMP content into :class:`MolecularIntegrals`.

    Parameters
    ----------
    text : str or file-like
        FCIDUMP content.  The body holds ``value i j k l`` records with
        1-based indices: ``0 0 0 0`` marks the core energy, ``i j 0 0`` a
        one-body entry, and four nonzero indices a two-body entry (chemist
        convention).  Each stored two-body value populates all eight
        symmetry-equivalent slots.

    Raises
    ------
    FcidumpError
        Missing NORB/NELEC, out-of-range indices, non-numeric values, or
        duplicate entries that conflict by more than ``DUPLICATE_TOLERANCE``.
    """
    if hasattr(text, "read"):
        text = text.read()
    lines = io.StringIO(text).read().splitlines()
    if not lines:
        raise FcidumpError("empty input")

    norb, nelec, body_start = _parse_header(lines)

    core = 0.0
    core_seen = False
    one: dict[tuple[int, int], float] = {}
    two: dict[tuple[int, int, int, int], float] = {}
    duplicates = 0

    def _store(store, key, value, lineno):
        nonlocal duplicates
        if key in store:
            if abs(store[key] - value) > DUPLICATE_TOLERANCE:
                raise FcidumpError(
                    f"duplicate entry for {key} conflicts: "
                    f"{store[key]!r} vs {value!r}",
                    line=lineno,
                )
            duplicates += 1
        store[key] = value

    for lineno0, raw in enumerate(lines[body_start:], start=body_start + 1):
        stripped = raw.strip()
        if not stripped:
            continue
        tokens = stripped.split()
        if len(tokens) != 5:
            raise FcidumpError(f"expected 'value i j k l', got {stripped!r}", line=lineno0)
        try:
            value = float(tokens[0].replace("D", "E").replace("d", "e"))
        except ValueError:
            raise FcidumpError(f"non-numeric value field {tokens[0]!r}", line=lineno0) from None
        try:
            i, j, k, l = (int(t) for t in tokens[1:])
        except ValueError:
            raise FcidumpError(f"non-integer index in {stripped!r}", line=lineno0) from None
        for idx in (i, j, k, l):
            if idx < 0 or idx > norb:
                raise FcidumpError(f"index {idx} out of range [0, {norb}]", line=lineno0)

        if i == j == k == l == 0:
            if core_seen and abs(core - value) > DUPLICATE_TOLERANCE:
                raise FcidumpError(
                    f"conflicting core energy: {core!r} vs {value!r}", line=lineno0
                )
            core = value
            core_seen = True
        elif k == 0 and l == 0:
            if j == 0:
                # Orbital-energy record emitted by some programs; not part of
                # the Hamiltonian.
                warnings.warn(
                    f"fcidump line {lineno0}: ignoring orbital-energy record for orbital {i}"
                )
                continue
            _store(one, (max(i, j) - 1, min(i, j) - 1), value, lineno0)
        elif 0 in (i, j, k, l):
            raise FcidumpError(
                f"malformed index pattern ({i} {j} {k} {l}): zeros are only "
                "allowed as trailing k=l=0 or the all-zero core record",
                line=lineno0,
            )
        else:
            _store(two, canonical_orbit(i - 1, j - 1, k - 1, l - 1), value, lineno0)

    if duplicates:
        warnings.warn(f"fcidump: {duplicates} duplicate entr(y/ies) overwritten (last wins)")

    h1 = np.zeros((norb, norb))
    for (a, b), v in one.items():
        h1[a, b] = v
        h1[b, a] = v
    h2 = np.zeros((norb, norb, norb, norb))
    for (a, b, c, d), v in two.items():
        for idx in orbit_members(a, b, c, d):
            h2[idx] = v

    m = MolecularIntegrals(norb, nelec, core, h1, h2)
    if not (np.isfinite(core) and np.isfinite(h1).all() and np.isfinite(h2).all()):
        raise FcidumpError("non-finite integral value")
    return m


def load_fcidump(path) -> MolecularIntegrals:
    """Parse an FCIDUMP file from disk."""
    with open(path, "r", encoding="ascii") as fh:
        return parse_fcidump(fh)


def write_fcidump(m: MolecularIntegrals, n_electrons: int | None = None) -> str:
    """Serialize to FCIDUMP text.

    Values are written with 17 significant digits so that
    ``parse_fcidump(write_fcidump(m)) == m`` exactly.  One representative per
    8-fold orbit is emitted.
    """
    n = m.n_orbitals
    nelec = m.n_electrons if n_electrons is None else n_electrons
    out = [
        f"&FCI NORB={n},NELEC={nelec},MS2=0,",
        " ORBSYM=" + ",".join(["1"] * n) + ",",
        " ISYM=1,",
        "&END",
    ]

    def fmt(v: float) -> str:
        return f"{v:.17g}"

    for i in range(n):
        for j in range(i + 1):
            for k in range(i + 1):
                lmax = j if k == i else k
                for l in range(lmax + 1):
                    v = m.two_body[i, j, k, l]
                    if v != 0.0:
                        out.append(f"{fmt(v)} {i + 1} {j + 1} {k + 1} {l + 1}")
    for i in range(n):
        for j in range(i + 1):
            v = m.one_body[i, j]
            if v != 0.0:
                out.append(f"{fmt(v)} {i + 1} {j + 1} 0 0")
    out.append(f"{fmt(m.core_energy)} 0 0 0 0")
    return "\n".join(out) + "\n"


def validate_symmetry(m: MolecularIntegrals, atol: float = SYMMETRY_TOLERANCE,
                      max_report: int = 100) -> list[SymmetryViolation]:
    """Check the one-body and 8-fold two-body symmetries.

    Returns an empty list iff every symmetry holds within ``atol`` (absolute)
    and all entries are finite.  Report-only: never raises.
    """
    violations: list[SymmetryViolation] = []
    h1, g = m.one_body, m.two_body

    if not np.isfinite(h1).all():
        for idx in np.argwhere(~np.isfinite(h1))[:max_report]:
            violations.append(SymmetryViolation("one_body finite", tuple(int(x) for x in idx), np.inf))
    if not np.isfinite(g).all():
        for idx in np.argwhere(~np.isfinite(g))[:max_report]:
            violations.append(SymmetryViolation("two_body finite", tuple(int(x) for x in idx), np.inf))
    if violations:
        return violations

    delta1 = h1 - h1.T
    bad = np.argwhere(np.abs(delta1) > atol)
    for i, j in bad[:max_report]:
        if i < j:
            violations.append(
                SymmetryViolation("h_ij = h_ji", (int(i), int(j)), float(abs(delta1[i, j])))
            )

    # The 8-fold group is generated by these three transpositions.
    generators = [
        ("(ij|kl) = (ji|kl)", (1, 0, 2, 3)),
        ("(ij|kl) = (ij|lk)", (0, 1, 3, 2)),
        ("(ij|kl) = (kl|ij)", (2, 3, 0, 1)),
    ]
    for name, perm in generators:
        delta = g - g.transpose(perm)
        bad = np.argwhere(np.abs(delta) > atol)
        seen: set[tuple] = set()
        for idx in bad:
            t = tuple(int(x) for x in idx)
            rep = canonical_orbit(*t)
            if rep in seen:
                continue
            seen.add(rep)
            violations.append(SymmetryViolation(name, t, float(abs(delta[t]))))
            if len(seen) >= max_report:
                break

    return violations


def adjusted_one_body(m: MolecularIntegrals) -> AdjustedOneBody:
    """Exchange- and Coulomb-contracted one-body matrices and the scalar shift.

    h_tilde_ij  = h_ij - 1/2 sum_l (il|lj)
    l_minus1_ij = h_tilde_ij + sum_l (ll|ij)
    scalar      = sum_i h_ii - 1/2 sum_il (il|li) + 1/2 sum_il (ll|ii)
    """
    h, g = m.one_body, m.two_body
    exchange = np.einsum("illj->ij", g)
    coulomb = np.einsum("llij->ij", g)
    h_tilde = h - 0.5 * exchange
    l_minus1 = h_tilde + coulomb
    scalar = float(np.trace(h) - 0.5 * np.einsum("illi->", g) + 0.5 * np.einsum("llii->", g))
    return AdjustedOneBody(
        h_tilde=h_tilde, l_minus1=l_minus1, scalar_shift=scalar, core_energy=m.core_energy
    )


def _orbit_values(g: np.ndarray) -> np.ndarray:
    """Values of the unique canonical orbit representatives of ``g``."""
    n = g.shape[0]
    i, j, k, l = np.meshgrid(*(np.arange(n),) * 4, indexing="ij")
    pair_ij = i * n + j
    pair_kl = k * n + l
    canonical = (i >= j) & (k >= l) & (pair_ij >= pair_kl)
    return g[canonical]


def count_nonzero_after_truncation(m: MolecularIntegrals, epsilon_in: float) -> int:
    """Unique nonzero two-body orbits kept after greedy magnitude truncation.

    Orbits are removed smallest-|value| first while the 2-norm of removed
    values stays within ``epsilon_in``.  Plain |(ij|kl)| is the per-orbit
    weight.
    """
    if epsilon_in < 0:
        raise ValueError("epsilon_in must be non-negative")
    values = np.abs(_orbit_values(m.two_body))
    values = values[values > 0.0]
    if values.size == 0:
        return 0
    values.sort()
    budget = epsilon_in * epsilon_in
    removed_sq = np.cumsum(values * values)
    n_removed = int(np.searchsorted(removed_sq, budget, side="right"))
    return int(values.size - n_removed)
