#!/usr/bin/env python3
"""Independent numpy oracle for the frozen values in the C++ test suites.

Builds every operator from explicit Kronecker products of 2x2 Pauli
matrices and evaluates probabilities by brute-force traces. Nothing here
shares code with the C++ implementation. Run it to regenerate the numbers
quoted in tests/*.cpp.
"""
import itertools

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = [I2, X, Y, Z]


def kron(*ops):
    out = np.array([[1.0 + 0j]])
    for op in ops:
        out = np.kron(out, op)
    return out


def weights(beta):
    norm = np.sqrt(1 - 2 * beta + 2 * beta**2)
    return (1 - beta) / norm, beta / norm


def w_beta(beta):
    f1, f2 = weights(beta)
    return 0.25 * (kron(I2, I2, I2, I2) + f1 * kron(I2, Z, Z, I2) + f2 * kron(Z, I2, X, Z))


def alice(x, a):
    return 0.25 * kron(I2 + (-1) ** x * Z, I2 + (-1) ** a * Z)


def bob(y, b, bp, t=(1, 0, 0), rho=None):
    if rho is None:
        rho = I2 / 2
    tsig = sum(ti * P for ti, P in zip(t, [X, Y, Z]))
    if bp == 1:
        return 0.5 * kron(I2 + (-1) ** y * Z, rho)
    return 0.25 * kron(I2 + (-1) ** y * tsig, I2 + (-1) ** (b ^ y) * Z)


def dist(W, t=(1, 0, 0), rho=None):
    p = {}
    for x, y, a, b, bp in itertools.product(range(2), repeat=5):
        val = np.trace(W @ np.kron(alice(x, a), bob(y, b, bp, t, rho)))
        p[(x, y, a, b, bp)] = val.real
    return p


def success(p, alpha, beta):
    pr = [alpha, 1 - alpha]
    s0 = sum(pr[a] * pr[b] * p[(b, y, a, b, 0)] for a in range(2) for b in range(2) for y in range(2))
    s1 = sum(pr[a] * pr[b] * p[(x, a, a, b, 1)] for a in range(2) for b in range(2) for x in range(2))
    return beta * s0 + (1 - beta) * s1


def phi_plus():
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1
    return np.outer(v, v)


def ordered_ab():
    # A_I maximally mixed, identity channel A_O -> B_I, B_O discarded
    return kron(I2 / 2, phi_plus(), I2)


def ordered_ba():
    # identity channel B_O -> A_I, B_I maximally mixed, A_O discarded
    m = np.kron(phi_plus(), np.kron(I2, I2 / 2))  # order A_I B_O A_O B_I
    m = m.reshape([2] * 8)
    # axes: (A_I, B_O, A_O, B_I) rows then cols; permute to (A_I, A_O, B_I, B_O)
    m = m.transpose(0, 2, 3, 1, 4, 6, 7, 5)
    return m.reshape(16, 16)


def witness():
    return 0.25 * (kron(I2, I2, I2, I2) - kron(I2, Z, Z, I2) - kron(Z, I2, X, Z))


def signaling(p):
    b_to_a = 0.0
    for a, x in itertools.product(range(2), repeat=2):
        vals = [sum(p[(x, y, a, b, bp)] for y in range(2)) for b in range(2) for bp in range(2)]
        b_to_a = max(b_to_a, max(vals) - min(vals))
    a_to_b = 0.0
    for b, bp, y in itertools.product(range(2), repeat=3):
        vals = [sum(p[(x, y, a, b, bp)] for x in range(2)) for a in range(2)]
        a_to_b = max(a_to_b, max(vals) - min(vals))
    return b_to_a, a_to_b


def main():
    np.set_printoptions(precision=12)
    print("W_beta(0.75) eigenvalues:", np.sort(np.linalg.eigvalsh(w_beta(0.75))))
    print("W_ocb eigenvalues:", np.sort(np.linalg.eigvalsh(w_beta(0.5))))
    print("weights(0.75):", weights(0.75))
    for beta in (0.5, 0.75):
        print(f"Tr[S W_beta({beta})]:", np.trace(witness() @ w_beta(beta)).real)
    p = dist(w_beta(0.5))
    print("p_succ W_ocb (0.5,0.5):", success(p, 0.5, 0.5))
    print("p_succ W_ocb (0.75,0.5):", success(p, 0.75, 0.5))
    print("p_succ W_beta(0.75) (0.5,0.75):", success(dist(w_beta(0.75)), 0.5, 0.75))
    print("signaling W_ocb (B->A, A->B):", signaling(p))

    for name, W in (("ordered_ab", ordered_ab()), ("ordered_ba", ordered_ba())):
        print(name, "trace", np.trace(W).real, "min eig", np.linalg.eigvalsh(W).min())
        pd = dist(W)
        s0 = sum(0.25 * pd[(b, y, a, b, 0)] for a in range(2) for b in range(2) for y in range(2))
        print(name, "p(x=b|b'=0)", s0, "p_succ(0.5,0.5)", success(pd, 0.5, 0.5))
        print(name, "signaling (B->A, A->B)", signaling(pd))
        print(name, "witness", np.trace(witness() @ W).real)
        coeffs = {}
        for t in itertools.product(range(4), repeat=4):
            c = np.trace(W @ kron(*[PAULI[k] for k in t])).real / 16
            if abs(c) > 1e-12:
                coeffs["".join("IXYZ"[k] for k in t)] = c
        print(name, "pauli", coeffs)

    # the pd with rho = |0><0|
    rho0 = np.array([[1, 0], [0, 0]], dtype=complex)
    print("rho invariance W_beta(0.75):",
          success(dist(w_beta(0.75), rho=rho0), 0.5, 0.75) - success(dist(w_beta(0.75)), 0.5, 0.75))

    # guarded instrument points
    m = 0.25 * (kron(I2, I2) + kron(Z, I2) + kron(I2, Z))
    print("alice T=0 min eig:", np.linalg.eigvalsh(m).min())
    m = 0.25 * (kron(I2, I2) + kron(X, I2) + kron(I2, Z))
    print("bob S=0 t=x o=z min eig:", np.linalg.eigvalsh(m).min())
    m = 0.25 * (np.eye(16) + 1.2 * kron(I2, Z, Z, I2))
    print("reprepare (1.2,...) min eig:", np.linalg.eigvalsh(m).min())

    # reduced matrices
    for beta in (0.5, 0.75):
        W = w_beta(beta)
        f1, f2 = weights(beta)
        for b in range(2):
            eta_sum = sum(bob(y, b, 0) for y in range(2))
            M = (W @ kron(I2, I2, eta_sum)).reshape(4, 4, 4, 4)
            red = np.einsum("ikjk->ij", M)
            closed = 0.5 * (kron(I2, I2) + (-1) ** b * f2 * kron(Z, I2))
            print(f"reduced A beta={beta} b={b} max dev from f2 form:", np.abs(red - closed).max())
        for a in range(2):
            xi_sum = sum(alice(x, a) for x in range(2))
            M = (W @ kron(xi_sum, I2, I2)).reshape(4, 4, 4, 4)
            red = np.einsum("kikj->ij", M)
            closed2 = 0.5 * (kron(I2, I2) + (-1) ** a * f2 * kron(Z, I2))
            closed1 = 0.5 * (kron(I2, I2) + (-1) ** a * f1 * kron(Z, I2))
            print(f"reduced B beta={beta} a={a} dev f2 form:", np.abs(red - closed2).max(),
                  "dev f1 form:", np.abs(red - closed1).max())


if __name__ == "__main__":
    main()
