#!/usr/bin/env python3
"""One-time generator for the committed molecular test fixtures.

Computes STO-3G integrals for linear hydrogen chains from closed-form
s-Gaussian formulas, runs a restricted Hartree-Fock calculation, transforms
to the MO basis, and writes FCIDUMP golden files plus a JSON reference with
independently computed full-CI energies (determinant-basis CI, no use of the
package's Jordan-Wigner oracle).

Usage: python scripts/make_fixtures.py [outdir]
"""

from __future__ import annotations

import itertools
import json
import math
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from qdf.integrals import MolecularIntegrals, write_fcidump  # noqa: E402

# STO-3G hydrogen: exponents scaled by zeta^2 with zeta = 1.24.
_H_EXPONENTS = np.array([3.425250914, 0.6239137298, 0.1688554040])
_H_COEFFS = np.array([0.1543289673, 0.5353281423, 0.4446345422])


def _boys0(t: float) -> float:
    if t < 1e-12:
        return 1.0 - t / 3.0
    return 0.5 * math.sqrt(math.pi / t) * math.erf(math.sqrt(t))


def _norm(a: float) -> float:
    return (2.0 * a / math.pi) ** 0.75


def _prim_overlap(a, ra, b, rb):
    p = a + b
    ab2 = float(np.dot(ra - rb, ra - rb))
    return _norm(a) * _norm(b) * (math.pi / p) ** 1.5 * math.exp(-a * b / p * ab2)


def _prim_kinetic(a, ra, b, rb):
    p = a + b
    ab2 = float(np.dot(ra - rb, ra - rb))
    red = a * b / p
    return red * (3.0 - 2.0 * red * ab2) * _prim_overlap(a, ra, b, rb)


def _prim_nuclear(a, ra, b, rb, rc, zc):
    p = a + b
    ab2 = float(np.dot(ra - rb, ra - rb))
    rp = (a * ra + b * rb) / p
    pc2 = float(np.dot(rp - rc, rp - rc))
    pref = -2.0 * math.pi / p * zc * math.exp(-a * b / p * ab2)
    return _norm(a) * _norm(b) * pref * _boys0(p * pc2)


def _prim_eri(a, ra, b, rb, c, rc, d, rd):
    p = a + b
    q = c + d
    ab2 = float(np.dot(ra - rb, ra - rb))
    cd2 = float(np.dot(rc - rd, rc - rd))
    rp = (a * ra + b * rb) / p
    rq = (c * rc + d * rd) / q
    pq2 = float(np.dot(rp - rq, rp - rq))
    pref = 2.0 * math.pi**2.5 / (p * q * math.sqrt(p + q))
    pref *= math.exp(-a * b / p * ab2 - c * d / q * cd2)
    return (
        _norm(a) * _norm(b) * _norm(c) * _norm(d) * pref * _boys0(p * q / (p + q) * pq2)
    )


def _contracted(fn, centers, *extra):
    """Contract a primitive integral over the STO-3G expansion per center."""
    total = 0.0
    for prims in itertools.product(range(3), repeat=len(centers)):
        coeff = np.prod([_H_COEFFS[k] for k in prims])
        args = []
        for k, ctr in zip(prims, centers):
            args.extend((_H_EXPONENTS[k], ctr))
        total += coeff * fn(*args, *extra)
    return total


def ao_integrals(centers: list[np.ndarray]):
    n = len(centers)
    s = np.zeros((n, n))
    t = np.zeros((n, n))
    v = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            s[i, j] = _contracted(_prim_overlap, [centers[i], centers[j]])
            t[i, j] = _contracted(_prim_kinetic, [centers[i], centers[j]])
            for rc in centers:
                v[i, j] += _contracted(_prim_nuclear, [centers[i], centers[j]], rc, 1.0)
    eri = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    eri[i, j, k, l] = _contracted(
                        _prim_eri, [centers[i], centers[j], centers[k], centers[l]]
                    )
    return s, t + v, eri


def nuclear_repulsion(centers) -> float:
    e = 0.0
    for i in range(len(centers)):
        for j in range(i):
            e += 1.0 / float(np.linalg.norm(centers[i] - centers[j]))
    return e


def rhf(s, hcore, eri, n_electrons, max_iter=200, conv=1e-12):
    n = s.shape[0]
    svals, svecs = np.linalg.eigh(s)
    x = svecs @ np.diag(svals**-0.5) @ svecs.T
    nocc = n_electrons // 2
    dens = np.zeros((n, n))
    energy = 0.0
    for _ in range(max_iter):
        j = np.einsum("ijkl,kl->ij", eri, dens)
        k = np.einsum("ikjl,kl->ij", eri, dens)
        fock = hcore + j - 0.5 * k
        _, c_ortho = np.linalg.eigh(x.T @ fock @ x)
        c = x @ c_ortho
        occ = c[:, :nocc]
        new_dens = 2.0 * occ @ occ.T
        new_energy = 0.5 * np.einsum("ij,ij->", new_dens, hcore + fock)
        if abs(new_energy - energy) < conv and np.abs(new_dens - dens).max() < 1e-10:
            dens = new_dens
            energy = new_energy
            break
        dens, energy = new_dens, new_energy
    return float(energy), c


def mo_transform(hcore, eri, c):
    h_mo = c.T @ hcore @ c
    eri_mo = np.einsum("pqrs,pi,qj,rk,sl->ijkl", eri, c, c, c, c, optimize=True)
    return h_mo, eri_mo


def fci_energy(h_mo, eri_mo, core, n_electrons) -> float:
    """Determinant-basis full CI: occupation tuples of spin orbitals
    (i, sigma) -> index i + sigma*N, with fermionic signs tracked by
    positions within the sorted occupation tuple."""
    n = h_mo.shape[0]
    n_so = 2 * n
    dets = [tuple(sorted(c)) for c in itertools.combinations(range(n_so), n_electrons)]
    index = {d: i for i, d in enumerate(dets)}
    dim = len(dets)
    h = np.zeros((dim, dim))

    def annihilate(det: tuple, p: int):
        if p not in det:
            return None, 0
        pos = det.index(p)
        return tuple(x for x in det if x != p), (-1) ** pos

    def create(det: tuple, p: int):
        if p in det:
            return None, 0
        pos = sum(1 for x in det if x < p)
        return tuple(sorted(det + (p,))), (-1) ** pos

    def spatial(p):
        return p % n

    def spin(p):
        return p // n

    for d_idx, det in enumerate(dets):
        # one-body: sum_pq h_pq a+_p a_q
        for q in det:
            det1, s1 = annihilate(det, q)
            for p in range(n_so):
                if spin(p) != spin(q):
                    continue
                det2, s2 = create(det1, p)
                if det2 is None:
                    continue
                h[index[det2], d_idx] += s1 * s2 * h_mo[spatial(p), spatial(q)]
        # two-body: 1/2 sum (ij|kl) a+_p a+_t a_u a_q with p,q same spin; t,u same spin
        for q in det:
            det1, s1 = annihilate(det, q)
            for u in det1:
                det2, s2 = annihilate(det1, u)
                for t in range(n_so):
                    if spin(t) != spin(u):
                        continue
                    det3, s3 = create(det2, t)
                    if det3 is None:
                        continue
                    for p in range(n_so):
                        if spin(p) != spin(q):
                            continue
                        det4, s4 = create(det3, p)
                        if det4 is None:
                            continue
                        val = 0.5 * eri_mo[spatial(p), spatial(q), spatial(t), spatial(u)]
                        h[index[det4], d_idx] += s1 * s2 * s3 * s4 * val
    return float(np.linalg.eigvalsh(h)[0] + core)


def make_chain(n_atoms: int, spacing: float = 1.4):
    centers = [np.array([0.0, 0.0, spacing * i]) for i in range(n_atoms)]
    s, hcore, eri = ao_integrals(centers)
    e_nuc = nuclear_repulsion(centers)
    e_rhf, c = rhf(s, hcore, eri, n_atoms)
    h_mo, eri_mo = mo_transform(hcore, eri, c)
    mol = MolecularIntegrals(n_atoms, n_atoms, e_nuc, h_mo, eri_mo)
    return mol, e_rhf + e_nuc


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(__file__), "..", "tests", "fixtures"
    )
    os.makedirs(outdir, exist_ok=True)

    h2, e_rhf_h2 = make_chain(2)
    with open(os.path.join(outdir, "h2_sto3g.fcidump"), "w") as fh:
        fh.write(write_fcidump(h2))
    e_fci_h2 = fci_energy(h2.one_body, h2.two_body, h2.core_energy, 2)

    h4, e_rhf_h4 = make_chain(4)
    with open(os.path.join(outdir, "h4_sto3g.fcidump"), "w") as fh:
        fh.write(write_fcidump(h4))
    e_fci_h4 = fci_energy(h4.one_body, h4.two_body, h4.core_energy, 4)

    ref = {
        "h2": {
            "spacing_bohr": 1.4,
            "n_orbitals": 2,
            "n_electrons": 2,
            "rhf_total_energy": e_rhf_h2,
            "fci_total_energy": e_fci_h2,
            "core_energy": h2.core_energy,
        },
        "h4": {
            "spacing_bohr": 1.4,
            "n_orbitals": 4,
            "n_electrons": 4,
            "rhf_total_energy": e_rhf_h4,
            "fci_total_energy": e_fci_h4,
            "core_energy": h4.core_energy,
        },
    }
    with open(os.path.join(outdir, "reference_energies.json"), "w") as fh:
        json.dump(ref, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(json.dumps(ref, indent=2))


if __name__ == "__main__":
    main()
