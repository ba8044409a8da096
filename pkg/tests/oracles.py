"""Independent reference constructions used only by the tests.

Everything here is built from first principles in the full 2^(2N) Fock
space with explicit Jordan-Wigner matrices, so it shares no code with the
package under test.
"""

from functools import reduce
from itertools import combinations

import numpy as np

I2 = np.eye(2)
Z = np.diag([1.0, -1.0])
LOWER = np.array([[0.0, 1.0], [0.0, 0.0]])  # |0><1| on one qubit: removes a particle


def _kron_list(mats):
    # qubit 0 is the least significant bit, so it goes last in the Kronecker product
    return reduce(np.kron, mats[::-1])


def annihilator(mode: int, n_modes: int) -> np.ndarray:
    mats = [Z] * mode + [LOWER] + [I2] * (n_modes - mode - 1)
    return _kron_list(mats)


def hubbard_full(n_sites: int, t: float, u: float, periodic: bool = False) -> np.ndarray:
    """Full-Fock-space Hubbard matrix; mode j = site j up, mode N + j = site j down."""
    n_modes = 2 * n_sites
    c = [annihilator(m, n_modes) for m in range(n_modes)]
    n_op = [ci.T @ ci for ci in c]
    h = np.zeros((1 << n_modes, 1 << n_modes))
    bonds = [(i, i + 1) for i in range(n_sites - 1)]
    if periodic and n_sites > 2:
        bonds.append((n_sites - 1, 0))
    for spin in (0, 1):
        off = spin * n_sites
        for i, j in bonds:
            hop = c[off + i].T @ c[off + j]
            h -= t * (hop + hop.T)
    for i in range(n_sites):
        h += u * n_op[i] @ n_op[n_sites + i]
    return h


def sector_words(n_sites: int, n_up: int, n_down: int) -> np.ndarray:
    words = []
    for mask in range(1 << (2 * n_sites)):
        up = mask & ((1 << n_sites) - 1)
        dn = mask >> n_sites
        if bin(up).count("1") == n_up and bin(dn).count("1") == n_down:
            words.append(mask)
    return np.array(words)


def sector_block(n_sites: int, t: float, u: float, periodic: bool = False, n_up=None, n_down=None):
    n_up = n_sites // 2 if n_up is None else n_up
    n_down = n_sites // 2 if n_down is None else n_down
    words = sector_words(n_sites, n_up, n_down)
    h = hubbard_full(n_sites, t, u, periodic)
    return words, h[np.ix_(words, words)]


def slater_full(up_cols: np.ndarray, dn_cols: np.ndarray) -> np.ndarray:
    """prod_k b_k^dag(down) prod_k b_k^dag(up) |vac> by applying creation matrices."""
    n_sites = up_cols.shape[0]
    n_modes = 2 * n_sites
    cdag = [annihilator(m, n_modes).T for m in range(n_modes)]
    v = np.zeros(1 << n_modes)
    v[0] = 1.0
    # creation order: down orbitals last, so down operators stand to the left
    for cols, off in ((up_cols, 0), (dn_cols, n_sites)):
        for k in range(cols.shape[1]):
            op = sum(cols[i, k] * cdag[off + i] for i in range(n_sites))
            v = op @ v
    return v


def dimer_energy(t: float, u: float) -> float:
    return 0.5 * (u - np.sqrt(u * u + 16 * t * t))


def all_pairs(n):
    return list(combinations(range(n), 2))
