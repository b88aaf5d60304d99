#!/usr/bin/env python3
"""Generate FCIDUMP fixtures (STO-3G) plus sidecar metadata JSON.

Usage: gen_fixtures.py [--out fixtures/] [--large]
"""
import argparse
import json
import math
import os

import numpy as np
from pyscf import ao2mo, gto, scf

CELLS = [
    # name, builder, bond length (angstrom), reference, frozen spatial orbitals
    ("h2_0.74", "h2", 0.74, "rhf", 0),
    ("h4_chain_eq", "h4_chain", 0.9, "rhf", 0),
    ("h4_chain_corr", "h4_chain", 2.0, "rhf", 0),
    ("h4_chain_diss", "h4_chain", 3.0, "rhf", 0),
    ("h4_rect_corr", "h4_rect", 1.0, "rhf", 0),
    ("h4_rect_diss", "h4_rect", 3.0, "rhf", 0),
]
LARGE_CELLS = [
    ("h2o_eq", "h2o", 1.0, "uhf", 1),
    ("h2o_corr", "h2o", 2.1, "uhf", 1),
    ("h2o_diss", "h2o", 3.0, "uhf", 1),
    ("n2_eq", "n2", 1.2, "uhf", 2),
    ("n2_corr", "n2", 1.4, "uhf", 2),
    ("n2_diss", "n2", 2.2, "uhf", 2),
]


def geometry(kind, r):
    if kind == "h2":
        return [("H", (0, 0, 0)), ("H", (0, 0, r))]
    if kind == "h4_chain":
        return [("H", (0, 0, i * r)) for i in range(4)]
    if kind == "h4_rect":
        # Two H2 units with 1.0 A bonds, separated by r.
        return [("H", (0, 0, 0)), ("H", (1.0, 0, 0)),
                ("H", (0, r, 0)), ("H", (1.0, r, 0))]
    if kind == "h2o":
        half = math.radians(104.5) / 2
        return [("O", (0, 0, 0)),
                ("H", (r * math.sin(half), 0, r * math.cos(half))),
                ("H", (-r * math.sin(half), 0, r * math.cos(half)))]
    if kind == "n2":
        return [("N", (0, 0, 0)), ("N", (0, 0, r))]
    raise ValueError(kind)


def run_scf(mol, ref):
    if ref == "rhf":
        mf = scf.RHF(mol)
    else:
        mf = scf.UHF(mol)
    mf.conv_tol = 1e-12
    mf.max_cycle = 500
    mf.kernel()
    if not mf.converged:
        mf.level_shift = 0.3
        mf.kernel()
    if ref == "uhf":
        # Follow internal instabilities to the lowest UHF solution.
        for _ in range(5):
            mo, _, stable, _ = mf.stability(return_status=True)
            if stable:
                break
            dm = mf.make_rdm1(mo, mf.mo_occ)
            mf.kernel(dm0=dm)
    return mf


def write_line(f, v, i, j, k, l):
    if abs(v) > 1e-14:
        f.write(f"{v: .16e} {i:4d} {j:4d} {k:4d} {l:4d}\n")


def dump(path, mol, mf, ref, nfrozen):
    hcore = mf.get_hcore()
    e_nuc = mol.energy_nuc()
    if ref == "rhf":
        mos = [mf.mo_coeff]
    else:
        mos = [mf.mo_coeff[0], mf.mo_coeff[1]]
    norb_full = mos[0].shape[1]
    act = slice(nfrozen, norb_full)
    ecore = e_nuc
    h_eff = []
    if nfrozen:
        # Doubly occupied frozen orbitals from each spin channel.
        dm_a = mos[0][:, :nfrozen] @ mos[0][:, :nfrozen].T
        dm_b = mos[-1][:, :nfrozen] @ mos[-1][:, :nfrozen].T
        vj, vk = scf.hf.get_jk(mol, np.array([dm_a, dm_b]))
        fa = hcore + vj[0] + vj[1] - vk[0]
        fb = hcore + vj[0] + vj[1] - vk[1]
        ecore += 0.5 * (np.einsum("ij,ji", dm_a, hcore + fa) + np.einsum("ij,ji", dm_b, hcore + fb))
        h_eff = [fa, fb]
    else:
        h_eff = [hcore, hcore]
    norb = norb_full - nfrozen
    nelec = mol.nelectron - 2 * nfrozen
    with open(path, "w") as f:
        f.write(f" &FCI NORB={norb:d},NELEC={nelec:d},MS2={mol.spin:d},\n")
        f.write("  ORBSYM=" + "1," * norb + "\n  ISYM=1,\n")
        if ref == "uhf":
            f.write("  IUHF=1,\n")
        f.write(" &END\n")
        if ref == "rhf":
            c = mos[0][:, act]
            eri = ao2mo.restore(8, ao2mo.kernel(mol, c), norb)
            idx = 0
            for i in range(norb):
                for j in range(i + 1):
                    for k in range(norb):
                        for l in range(k + 1):
                            ij = i * (i + 1) // 2 + j
                            kl = k * (k + 1) // 2 + l
                            if ij >= kl:
                                write_line(f, eri[ij * (ij + 1) // 2 + kl], i + 1, j + 1, k + 1, l + 1)
            h = c.T @ h_eff[0] @ c
            for i in range(norb):
                for j in range(i + 1):
                    write_line(f, h[i, j], i + 1, j + 1, 0, 0)
        else:
            ca = mos[0][:, act]
            cb = mos[1][:, act]
            blocks = [(ca, ca, ca, ca), (cb, cb, cb, cb), (ca, ca, cb, cb)]
            for n, blk in enumerate(blocks):
                eri = ao2mo.general(mol, blk, compact=False).reshape(norb, norb, norb, norb)
                for i in range(norb):
                    for j in range(i + 1):
                        for k in range(norb):
                            for l in range(k + 1):
                                ij = i * (i + 1) // 2 + j
                                kl = k * (k + 1) // 2 + l
                                if n == 2 or ij >= kl:
                                    write_line(f, eri[i, j, k, l], i + 1, j + 1, k + 1, l + 1)
                f.write(f"{0.0: .16e} {0:4d} {0:4d} {0:4d} {0:4d}\n")
            for c, hh in ((ca, h_eff[0]), (cb, h_eff[1])):
                h = c.T @ hh @ c
                for i in range(norb):
                    for j in range(i + 1):
                        write_line(f, h[i, j], i + 1, j + 1, 0, 0)
                f.write(f"{0.0: .16e} {0:4d} {0:4d} {0:4d} {0:4d}\n")
        f.write(f"{ecore: .16e} {0:4d} {0:4d} {0:4d} {0:4d}\n")
    return norb, nelec


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="fixtures")
    ap.add_argument("--large", action="store_true")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    cells = CELLS + (LARGE_CELLS if args.large else [])
    for name, kind, r, ref, nfrozen in cells:
        mol = gto.M(atom=geometry(kind, r), basis="sto-3g", unit="Angstrom", verbose=0)
        mf = run_scf(mol, ref)
        path = os.path.join(args.out, name + ".fcidump")
        norb, nelec = dump(path, mol, mf, ref, nfrozen)
        meta = {
            "molecule": kind, "bond_length_angstrom": r, "basis": "sto-3g",
            "reference": ref, "frozen_spatial_orbitals": nfrozen,
            "n_spin_orbitals": 2 * norb, "n_electrons": nelec,
            "scf_energy": float(mf.e_tot), "scf_converged": bool(mf.converged),
        }
        with open(os.path.join(args.out, name + ".json"), "w") as f:
            json.dump(meta, f, indent=2)
            f.write("\n")
        print(f"{name}: N={2 * norb} ne={nelec} E_scf={mf.e_tot:.10f}")


if __name__ == "__main__":
    main()
