"""Regenerate the shipped structure-constant fixtures (schema_version 1)."""
import json
from fractions import Fraction
from pathlib import Path

HERE = Path(__file__).resolve().parent


def s(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dense(n, cols):
    """cols: dict j -> {i: coeff}; returns rows[i][j]."""
    return [[s(cols.get(j, {}).get(i, 0)) for j in range(n)] for i in range(n)]


def ident(n):
    return dense(n, {j: {j: 1} for j in range(n)})


def scalar_action(n_h, dim, counit):
    return [dense(dim, {j: {j: counit[h]} for j in range(dim)}) for h in range(n_h)]


def group_hopf(name, n, mult, inv, names):
    mu = [[i, j, mult(i, j), "1"] for i in range(n) for j in range(n)]
    return {
        "name": name, "dim": n, "names": names,
        "mu": mu, "unit": [s(1 if i == 0 else 0) for i in range(n)],
        "delta": [[[k, k, "1"]] for k in range(n)],
        "counit": ["1"] * n,
        "antipode": dense(n, {j: {inv(j): 1} for j in range(n)}),
        "antipode_inv": dense(n, {j: {inv(j): 1} for j in range(n)}),
    }


TRIVIAL_H = group_hopf("k", 1, lambda i, j: 0, lambda j: 0, ["1"])
KZ2 = group_hopf("kZ2", 2, lambda i, j: (i + j) % 2, lambda j: j, ["1", "g"])
KZ2_COALG = {"name": "kZ2", "dim": 2, "names": ["1", "g"],
             "delta": [[[0, 0, "1"]], [[1, 1, "1"]]], "counit": ["1", "1"]}
POINT = {"name": "point", "dim": 1, "names": ["e"], "delta": [[[0, 0, "1"]]], "counit": ["1"]}
KZ2_ALG = {"name": "kZ2", "dim": 2, "names": ["1", "u"],
           "mu": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"], [1, 1, 0, "1"]], "unit": ["1", "0"]}
DUAL_ALG = {"name": "dual", "dim": 2, "names": ["1", "x"],
            "mu": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"]], "unit": ["1", "0"]}
DUAL_COALG = {"name": "dualco", "dim": 2, "names": ["1", "x"],
              "delta": [[[0, 0, "1"]], [[0, 1, "1"], [1, 0, "1"]]], "counit": ["1", "0"]}
COMATRIX = {"name": "comatrix", "dim": 4, "names": ["e11", "e12", "e21", "e22"],
            "delta": [[[2 * i + k, 2 * k + j, "1"] for k in range(2)] for i in range(2) for j in range(2)],
            "counit": ["1", "0", "0", "1"]}
# Delta e1 = e1 (x) e2 and nothing else
BROKEN2 = {"name": "broken", "dim": 2, "names": ["e1", "e2"],
           "delta": [[[0, 1, "1"]], []], "counit": ["0", "0"]}


def sweedler():
    # basis 1, g, x, gx
    table = {
        (0, 0): {0: 1}, (0, 1): {1: 1}, (0, 2): {2: 1}, (0, 3): {3: 1},
        (1, 0): {1: 1}, (1, 1): {0: 1}, (1, 2): {3: 1}, (1, 3): {2: 1},
        (2, 0): {2: 1}, (2, 1): {3: -1}, (2, 2): {}, (2, 3): {},
        (3, 0): {3: 1}, (3, 1): {2: -1}, (3, 2): {}, (3, 3): {},
    }
    mu = [[i, j, k, s(c)] for (i, j), v in sorted(table.items()) for k, c in sorted(v.items())]
    return {
        "name": "sweedler", "dim": 4, "names": ["1", "g", "x", "gx"],
        "mu": mu, "unit": ["1", "0", "0", "0"],
        "delta": [[[0, 0, "1"]], [[1, 1, "1"]], [[2, 0, "1"], [1, 2, "1"]], [[3, 1, "1"], [0, 3, "1"]]],
        "counit": ["1", "1", "0", "0"],
        "antipode": dense(4, {0: {0: 1}, 1: {1: 1}, 2: {3: -1}, 3: {2: 1}}),
        "antipode_inv": dense(4, {0: {0: 1}, 1: {1: 1}, 2: {3: 1}, 3: {2: -1}}),
    }


def sweedler_left_mult():
    sw = sweedler()
    table = {}
    for i, j, k, c in sw["mu"]:
        table.setdefault(i, {}).setdefault(j, {})[k] = Fraction(c)
    return [dense(4, table.get(h, {})) for h in range(4)]


def sayd_1d(name, n_h, sigma, delta_chi):
    return {"name": name, "dim": 1,
            "right_action": [[[s(delta_chi[h])]] for h in range(n_h)],
            "coaction": [[[sigma, 0, "1"]]]}


def dump(x, ind=0):
    pad = " " * ind
    if isinstance(x, dict):
        items = [f'{pad}  {json.dumps(k)}: {dump(v, ind + 2).lstrip()}' for k, v in x.items()]
        return pad + "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(x, list) and any(isinstance(v, dict) for v in x):
        return pad + "[\n" + ",\n".join(dump(v, ind + 2) for v in x) + "\n" + pad + "]"
    return pad + json.dumps(x)


def write(name, doc):
    doc = {"schema_version": 1, **doc}
    (HERE / f"{name}.json").write_text(dump(doc) + "\n")


write("trivial", {
    "hopf": TRIVIAL_H, "coalgebras": [POINT], "algebras": [{**KZ2_ALG, "name": "A"}],
    "sayd_modules": [sayd_1d("k", 1, 0, [1])],
    "actions": [{"kind": "coalgebra_on_algebra", "source": "point", "target": "A",
                 "matrices": [ident(2)]}],
    "select": {"coalgebra": "point", "sayd": "k", "algebra": "A"},
})

write("trivial_dual", {
    "hopf": TRIVIAL_H, "coalgebras": [POINT], "algebras": [{**DUAL_ALG, "name": "A"}],
    "sayd_modules": [sayd_1d("k", 1, 0, [1])],
    "actions": [{"kind": "coalgebra_on_algebra", "source": "point", "target": "A",
                 "matrices": [ident(2)]}],
    "select": {"coalgebra": "point", "sayd": "k", "algebra": "A"},
})

write("coalgebras", {
    "hopf": TRIVIAL_H,
    "coalgebras": [POINT, KZ2_COALG, COMATRIX, BROKEN2, DUAL_COALG],
    "sayd_modules": [sayd_1d("k", 1, 0, [1])],
})

sign = dense(2, {0: {0: 1}, 1: {1: -1}})
write("kz2_twisted", {
    "hopf": KZ2,
    "coalgebras": [{**KZ2_COALG, "name": "C"}, POINT],
    "algebras": [{**KZ2_ALG, "name": "A"}],
    "sayd_modules": [sayd_1d("eps", 2, 0, [1, 1]), sayd_1d("g_eps", 2, 1, [1, 1]),
                     sayd_1d("g_sign", 2, 1, [1, -1])],
    "actions": [
        {"kind": "hopf_on_coalgebra", "target": "C",
         "matrices": [ident(2), dense(2, {0: {1: 1}, 1: {0: 1}})]},
        {"kind": "hopf_on_algebra", "target": "A", "matrices": [ident(2), sign]},
        {"kind": "coalgebra_on_algebra", "source": "C", "target": "A", "matrices": [ident(2), sign]},
    ],
    "select": {"coalgebra": "C", "sayd": "g_eps", "algebra": "A"},
})

write("conjugation", {
    "hopf": KZ2,
    "coalgebras": [{**KZ2_COALG, "name": "C"}],
    "algebras": [{**KZ2_ALG, "names": ["1", "g"], "name": "A"},
                 {**KZ2_ALG, "names": ["1", "g"], "name": "A_broken"}],
    "sayd_modules": [sayd_1d("eps", 2, 0, [1, 1])],
    "actions": [
        # c . a = c1 a S(c2) is the identity on an abelian group algebra
        {"kind": "coalgebra_on_algebra", "source": "C", "target": "A", "matrices": [ident(2), ident(2)]},
        # c . a = c a
        {"kind": "coalgebra_on_algebra", "source": "C", "target": "A_broken",
         "matrices": [ident(2), dense(2, {0: {1: 1}, 1: {0: 1}})]},
    ],
    "select": {"coalgebra": "C", "sayd": "eps", "algebra": "A"},
})

write("sweedler", {
    "hopf": sweedler(),
    "coalgebras": [{**{k: v for k, v in sweedler().items() if k in ("dim", "names", "delta", "counit")},
                    "name": "H"}, POINT],
    "sayd_modules": [sayd_1d("delta_sign", 4, 0, [1, -1, 0, 0]), sayd_1d("sigma_g", 4, 1, [1, 1, 0, 0]),
                     sayd_1d("trivial", 4, 0, [1, 1, 0, 0])],
    "actions": [{"kind": "hopf_on_coalgebra", "target": "H", "matrices": sweedler_left_mult()}],
    "select": {"coalgebra": "H", "sayd": "delta_sign"},
})
