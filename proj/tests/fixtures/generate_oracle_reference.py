"""Regenerates the ED reference tables used by the C++ tests.

Independent of the C++ code: builds the spin Hamiltonians with numpy,
diagonalises each parity block and evaluates
(1/N) Tr[rho_B (U^dag H_B U - H_B)] with an explicit U = exp(-i H_C tau).

    python3 tests/fixtures/generate_oracle_reference.py
"""
import math
import pathlib

import numpy as np

HERE = pathlib.Path(__file__).parent


def spin_hamiltonian(kind, N, n, phi, twist):
    """0.5 * H(-phi); with twist, boundary terms flip sign on even-parity states."""
    dim = 2 ** N
    H = np.zeros((dim, dim))
    lengths = [n] if kind == "h1" else list(range(1, n + 1))
    w = 1.0 if kind == "h1" else 1.0 / n
    field = -math.sin(phi)
    for s in range(dim):
        down = bin(s).count("1")
        H[s, s] += field * (N - 2 * down)
        for l in lengths:
            for j in range(N):
                b = (j + l + 1) % N
                sign = 1.0
                for k in range(1, l + 1):
                    if (s >> ((j + k) % N)) & 1:
                        sign = -sign
                if twist and j + l + 1 >= N and down % 2 == 0:
                    sign = -sign
                t = s if b == j else s ^ (1 << j) ^ (1 << b)
                H[t, s] += -math.cos(phi) * w * sign
    return 0.5 * H


def energy(kind, N, n, phi_b, phi_c, beta, tau, ensemble):
    parities = [1] if ensemble == "odd" else [0, 1]
    blocks = []
    for par in parities:
        idx = [s for s in range(2 ** N) if bin(s).count("1") % 2 == par]
        hb = spin_hamiltonian(kind, N, n, phi_b, True)[np.ix_(idx, idx)]
        hc = spin_hamiltonian(kind, N, n, phi_c, True)[np.ix_(idx, idx)]
        blocks.append((hb, hc))
    levels = [np.linalg.eigh(hb) for hb, _ in blocks]
    e0 = min(v[0].min() for v in levels)
    weights = []
    for vals, _ in levels:
        if beta is None:
            weights.append((vals <= e0 + 1e-10).astype(float))
        else:
            weights.append(np.exp(-beta * (vals - e0)))
    z = sum(w.sum() for w in weights)
    total = 0.0
    for (hb, hc), (vals, vecs), w in zip(blocks, levels, weights):
        rho = (vecs * (w / z)) @ vecs.T
        lc, vc = np.linalg.eigh(hc)
        U = (vc * np.exp(-1j * lc * tau)) @ vc.T
        total += np.trace(rho @ (U.conj().T @ hb @ U - hb)).real
    return float(total / N)


def main():
    pi = math.pi
    cases = []
    for beta in (1.0, None):
        for tau in (0.3, 1.0, 2.5):
            cases.append(("h1", 8, 2, 0.0, pi / 3, beta, tau))
    for beta in (1.0, None):
        cases.append(("h2", 8, 3, 0.4, 1.1, beta, 1.0))
        cases.append(("h2", 6, 2, pi / 4, pi / 2 - 0.3, beta, 2.5))
        cases.append(("h1", 6, 1, 0.0, pi / 3, beta, 1.0))
    for ensemble in ("fock", "odd"):
        path = HERE / f"oracle_reference_{ensemble}.csv"
        with path.open("w") as f:
            f.write("model,N,n,phi_b,phi_c,beta,tau,energy\n")
            for kind, N, n, pb, pc, beta, tau in cases:
                e = energy(kind, N, n, pb, pc, beta, tau, ensemble)
                b = "inf" if beta is None else repr(beta)
                f.write(f"{kind},{N},{n},{pb!r},{pc!r},{b},{tau!r},{e!r}\n")
        print("wrote", path)


if __name__ == "__main__":
    main()
