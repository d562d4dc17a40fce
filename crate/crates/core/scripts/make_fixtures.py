"""Regenerate the molecular integral fixtures under ../fixtures.

Requires pyscf and scipy. Every file written here is committed, so the Rust
test-suite never needs Python.

Outputs per system:
  <name>.fcidump        real FCIDUMP (chemist notation, MO basis)
  <name>.ref.json       HF and FCI energies from the same run
TC-style fixtures (<name>_tc.fcidump, ITC=1) apply a non-unitary one-body
similarity transform exp(-K) H exp(K) to the MO integrals. The spectrum is
unchanged, so the ED energy of the transformed file equals the FCI energy.
"""
import json
import os

import numpy as np
import scipy.linalg
from pyscf import ao2mo, fci, gto, scf
from pyscf.tools import fcidump

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "fixtures")


def h2(r):
    return f"H 0 0 0; H 0 0 {r}"


def h4_square(a):
    return f"H 0 0 0; H {a} 0 0; H {a} {a} 0; H 0 {a} 0"


def lih(r):
    return f"Li 0 0 0; H 0 0 {r}"


def h2o(r, angle=104.4):
    t = np.deg2rad(angle / 2)
    return f"O 0 0 0; H {r*np.sin(t)} {r*np.cos(t)} 0; H {-r*np.sin(t)} {r*np.cos(t)} 0"


def run(name, atom, spin=0):
    mol = gto.M(atom=atom, basis="sto-6g", unit="Angstrom", spin=spin, verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.max_cycle = 200
    e_hf = mf.kernel()
    if not mf.converged:
        raise RuntimeError(f"{name}: RHF not converged")
    norb = mf.mo_coeff.shape[1]
    h1 = mf.mo_coeff.T @ mf.get_hcore() @ mf.mo_coeff
    eri = ao2mo.restore(1, ao2mo.kernel(mol, mf.mo_coeff), norb)
    ecore = mol.energy_nuc()
    cis = fci.direct_spin1.FCI()
    cis.conv_tol = 1e-12
    e_fci, _ = cis.kernel(h1, eri, norb, mol.nelectron, ecore=ecore, nroots=1)
    path = os.path.join(OUT, f"{name}.fcidump")
    fcidump.from_integrals(path, h1, eri, norb, mol.nelectron, nuc=ecore, ms=spin, tol=1e-14)
    ref = {
        "system": name,
        "basis": "STO-6G",
        "n_spatial": int(norb),
        "n_electrons": int(mol.nelectron),
        "hf_energy": float(e_hf),
        "reference_energy": float(e_fci),
        "reference_label": "FCI/STO-6G",
    }
    with open(os.path.join(OUT, f"{name}.ref.json"), "w") as f:
        json.dump(ref, f, indent=2)
        f.write("\n")
    print(f"{name}: norb={norb} nelec={mol.nelectron} HF={e_hf:.10f} FCI={e_fci:.10f}")
    return h1, eri, ecore, norb, mol.nelectron, e_fci


def write_tc(name, h1, eri, ecore, norb, nelec, e_ref, seed, strength=0.15):
    rng = np.random.default_rng(seed)
    k = rng.normal(scale=strength, size=(norb, norb))
    k = 0.5 * (k + k.T)  # symmetric generator: exp(K) is not unitary
    left = scipy.linalg.expm(-k)
    right = scipy.linalg.expm(k)
    h1t = left @ h1 @ right
    # (pq|rs): p, r carry creators, q, s annihilators
    erit = np.einsum("ap,bq,cr,ds,pqrs->abcd", left, right.T, left, right.T, eri)
    cis = fci.direct_nosym.FCI()
    path = os.path.join(OUT, f"{name}_tc.fcidump")
    with open(path, "w") as f:
        f.write(f" &FCI NORB={norb},NELEC={nelec},MS2=0,ITC=1,\n")
        f.write("  ORBSYM=" + "1," * norb + "\n  ISYM=1,\n &END\n")
        for p in range(norb):
            for q in range(norb):
                for r in range(norb):
                    for s in range(norb):
                        v = erit[p, q, r, s]
                        if abs(v) > 1e-14:
                            f.write(f"{v:.16e} {0.0:.16e} {p+1} {q+1} {r+1} {s+1}\n")
        for p in range(norb):
            for q in range(norb):
                v = h1t[p, q]
                if abs(v) > 1e-14:
                    f.write(f"{v:.16e} {0.0:.16e} {p+1} {q+1} 0 0\n")
        f.write(f"{ecore:.16e} {0.0:.16e} 0 0 0 0\n")
    ref = {
        "system": f"{name}_tc",
        "basis": "STO-6G",
        "n_spatial": int(norb),
        "n_electrons": int(nelec),
        "reference_energy": float(e_ref),
        "reference_label": "ED-TC/STO-6G",
    }
    with open(os.path.join(OUT, f"{name}_tc.ref.json"), "w") as f:
        json.dump(ref, f, indent=2)
        f.write("\n")
    print(f"{name}_tc written (seed {seed})")


if __name__ == "__main__":
    os.makedirs(OUT, exist_ok=True)
    h2_data = run("h2_0.735", h2(0.735))
    write_tc("h2_0.735", *h2_data, seed=7)
    run("h4_square_2.0", h4_square(2.0))
    lih_data = run("lih_2.25", lih(2.25))
    write_tc("lih_2.25", *lih_data, seed=11, strength=0.05)
    run("h2o_1.5", h2o(1.5))
    for r in (0.5, 0.9, 1.3, 1.7, 2.1):
        run(f"h2_{r:.3f}", h2(r))
