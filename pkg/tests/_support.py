"""Shared generators and small oracles for the test suite."""
import random

from floerforge.complexes import BifilteredComplex, Grading
from floerforge.decomposition import random_decomposition, scramble
from floerforge.exactalg import GF2


def _random_scalar(rng, field):
    if field is GF2:
        return 1
    return field.coerce(rng.choice([-2, -1, 1, 2, 3]))


def _invert_dense(field, m):
    n = len(m)
    a = [list(row) + [1 if r == c else 0 for c in range(n)] for r, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col])
        a[col], a[piv] = a[piv], a[col]
        inv = field.inv(a[col][col])
        a[col] = [field.mul(v, inv) for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                k = a[r][col]
                a[r] = [field.add(x, field.neg(field.mul(k, y))) for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def filtered_basis_change(c, rng, density=0.3):
    """Change basis by x -> x + sum c_y y over generators y with the same Maslov
    grading and Alexander gradings no larger than those of x. The new
    differential is P^-1 D P, still filtered."""
    f = c.field
    ids = list(c.generators)
    n = len(ids)
    idx = {g: k for k, g in enumerate(ids)}
    p = [[1 if r == k else 0 for k in range(n)] for r in range(n)]
    for k, x in enumerate(ids):
        gx = c.generators[x]
        for r, y in enumerate(ids):
            gy = c.generators[y]
            lower = gy.maslov == gx.maslov and all(a <= b for a, b in zip(gy.alex, gx.alex))
            strictly = gy.alex != gx.alex or r < k
            if r != k and lower and strictly and rng.random() < density:
                p[r][k] = _random_scalar(rng, f)
    pinv = _invert_dense(f, p)
    d = [[0] * n for _ in range(n)]
    for (s, t), v in c.diff.items():
        d[idx[t]][idx[s]] = v

    def mul(a, b):
        return [[_dot(f, a[r], [b[q][k] for q in range(n)]) for k in range(n)] for r in range(n)]

    new = mul(pinv, mul(d, p))
    diff = {(ids[k], ids[r]): new[r][k] for r in range(n) for k in range(n) if new[r][k]}
    return BifilteredComplex(f, dict(c.generators), diff)


def _dot(f, row, col):
    acc = 0
    for a, b in zip(row, col):
        if a and b:
            acc = f.add(acc, f.mul(a, b))
    return acc


def random_valid_complex(seed, field=GF2, max_gens=10, pairs=3):
    """A realized random decomposition plus grading-preserving acyclic pairs,
    mixed by a block scramble and a filtered basis change.

    Returns the complex and the module of generators that survive cancelling
    the pairs, which is the associated graded homology.
    """
    rng = random.Random(seed)
    dec = random_decomposition(rng, max_gens=max_gens, max_l=2)
    c = dec.realize(field)
    gens = dict(c.generators)
    diff = dict(c.diff)
    ref = list(gens.values())
    for k in range(rng.randint(0, pairs)):
        g = rng.choice(ref)
        top = Grading(g.alex, g.maslov + 2 * rng.randint(-1, 1))
        gens[f"p{k}"] = top
        gens[f"q{k}"] = Grading(top.alex, top.maslov - 2)
        diff[(f"p{k}", f"q{k}")] = _random_scalar(rng, field)
    c = BifilteredComplex(field, gens, diff)
    c = scramble(c, rng)
    c = filtered_basis_change(c, rng)
    return c, dec
