#!/usr/bin/env python3
"""Regenerates the shipped fixture files.

Archimedean log absolute values are evaluated from explicit real embeddings
with mpmath at 80 digits and written with 50 significant digits.  Place
ordering, ramification data and Galois permutations are written by hand.
"""
import json
import os

from mpmath import mp, mpf, sqrt, log, nstr

mp.dps = 80
DIGITS = 50


def dec(x):
    s = nstr(x, DIGITS, min_fixed=-mp.inf, max_fixed=mp.inf)
    assert "e" not in s
    return s


def vec(label, arch, fin=None):
    """arch: list of real embedding values (place id = list index)."""
    out = {"label": label, "fin": {}, "arch": {}}
    for pid, value in enumerate(arch):
        out["arch"][str(pid)] = dec(log(abs(value)))
    for pid, m in (fin or {}).items():
        out["fin"][str(pid)] = m
    return out


def write(name, doc):
    path = os.path.join(os.path.dirname(os.path.abspath(__file__)), name + ".json")
    with open(path, "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def inf_place(pid):
    return {"id": pid, "over": "INF", "local_degree": 1, "ram_index": 1}


def fin_place(pid, p, d, e):
    return {"id": pid, "over": p, "local_degree": d, "ram_index": e}


# -- Q, S = {inf, 2} ---------------------------------------------------------
write("q", {
    "label": "Q",
    "degree": 1,
    "places": [inf_place(0), fin_place(1, 2, 1, 1)],
    "galois": {"group_order": 1, "generators": []},
    "subgroups": [{"label": "Q", "generators": []}],
    "s_unit_basis": [vec("2", [mpf(2)], {1: "1"})],
    "prime_generators": {"class_number": 1,
                         "generators": {"1": vec("2", [mpf(2)], {1: "1"})}},
    "elements": {
        "one": {"coords": ["0"]},
        "2": {"coords": ["1"]},
        "sqrt2": {"coords": ["1/2"]},
        "1/2": {"coords": ["-1"]},
    },
})

# -- Q(sqrt2) ----------------------------------------------------------------
# places: 0 = (sqrt2 -> +sqrt2), 1 = (sqrt2 -> -sqrt2), 2 = the ramified prime over 2
r2 = sqrt(2)
emb2 = [r2, -r2]


def q2(a, b):
    return [a + b * s for s in emb2]


q2_basis = [
    vec("1+sqrt2", q2(1, 1)),
    vec("sqrt2", q2(0, 1), {2: "1"}),
]
write("qsqrt2", {
    "label": "Qsqrt2",
    "degree": 2,
    "places": [inf_place(0), inf_place(1), fin_place(2, 2, 2, 2)],
    "galois": {"group_order": 2, "generators": [[1, 0, 2]]},
    "subgroups": [
        {"label": "Q(sqrt2)", "generators": []},
        {"label": "Q", "generators": [[1, 0, 2]]},
    ],
    "s_unit_basis": q2_basis,
    "prime_generators": {"class_number": 1,
                         "generators": {"2": vec("sqrt2", q2(0, 1), {2: "1"})}},
    "elements": {
        "one": {"coords": ["0", "0"]},
        "1+sqrt2": {"coords": ["1", "0"], "pisot_salem_house": dec(1 + r2)},
        "sqrt2": {"coords": ["0", "1"]},
        "2": {"coords": ["0", "2"]},
        "2^(3/2)": {"coords": ["0", "3"]},
    },
})

# -- Q(sqrt2) with the split prime 7 = (3+sqrt2)(3-sqrt2) ----------------------
# place 3 has |3+sqrt2| < 1, place 4 has |3-sqrt2| < 1
write("qsqrt2-ext", {
    "label": "Qsqrt2-ext",
    "degree": 2,
    "places": [inf_place(0), inf_place(1), fin_place(2, 2, 2, 2),
               fin_place(3, 7, 1, 1), fin_place(4, 7, 1, 1)],
    "galois": {"group_order": 2, "generators": [[1, 0, 2, 4, 3]]},
    "subgroups": [
        {"label": "Q(sqrt2)", "generators": []},
        {"label": "Q", "generators": [[1, 0, 2, 4, 3]]},
    ],
    "s_unit_basis": [
        vec("1+sqrt2", q2(1, 1)),
        vec("sqrt2", q2(0, 1), {2: "1"}),
        vec("3+sqrt2", q2(3, 1), {3: "1"}),
        vec("3-sqrt2", q2(3, -1), {4: "1"}),
    ],
    "prime_generators": {"class_number": 1, "generators": {
        "2": vec("sqrt2", q2(0, 1), {2: "1"}),
        "3": vec("3+sqrt2", q2(3, 1), {3: "1"}),
        "4": vec("3-sqrt2", q2(3, -1), {4: "1"}),
    }},
    "elements": {
        "one": {"coords": ["0", "0", "0", "0"]},
        "1+sqrt2": {"coords": ["1", "0", "0", "0"], "pisot_salem_house": dec(1 + r2)},
        "sqrt2": {"coords": ["0", "1", "0", "0"]},
        "3+sqrt2": {"coords": ["0", "0", "1", "0"]},
        "3-sqrt2": {"coords": ["0", "0", "0", "1"]},
        "7": {"coords": ["0", "0", "1", "1"]},
        "7(1+sqrt2)": {"coords": ["1", "0", "1", "1"]},
    },
})

# -- Q(sqrt5), S = {inf, 5} ------------------------------------------------------
r5 = sqrt(5)
emb5 = [r5, -r5]


def q5(a, b, den=1):
    return [(a + b * s) / den for s in emb5]


write("qsqrt5", {
    "label": "Qsqrt5",
    "degree": 2,
    "places": [inf_place(0), inf_place(1), fin_place(2, 5, 2, 2)],
    "galois": {"group_order": 2, "generators": [[1, 0, 2]]},
    "subgroups": [
        {"label": "Q(sqrt5)", "generators": []},
        {"label": "Q", "generators": [[1, 0, 2]]},
    ],
    "s_unit_basis": [
        vec("golden", q5(1, 1, 2)),
        vec("sqrt5", q5(0, 1), {2: "1"}),
    ],
    "prime_generators": {"class_number": 1,
                         "generators": {"2": vec("sqrt5", q5(0, 1), {2: "1"})}},
    "elements": {
        "one": {"coords": ["0", "0"]},
        "golden": {"coords": ["1", "0"], "pisot_salem_house": dec((1 + r5) / 2)},
        "sqrt5": {"coords": ["0", "1"]},
        "5": {"coords": ["0", "2"]},
    },
})

# -- Q(sqrt2, sqrt3), S = {inf, 2, 3} ----------------------------------------------
# real places by sign of (sqrt2, sqrt3): 0 (+,+), 1 (-,+), 2 (+,-), 3 (-,-)
# 2 is totally ramified (e = 4); 3 has e = 2, f = 2.
r3 = sqrt(3)
embb = [(r2, r3), (-r2, r3), (r2, -r3), (-r2, -r3)]


def qb(a, b, c, d, den=1):
    return [(a + b * x + c * y + d * x * y) / den for (x, y) in embb]


sigma = [1, 0, 3, 2, 4, 5]      # sqrt2 -> -sqrt2, fixes Q(sqrt3)
tau = [2, 3, 0, 1, 4, 5]        # sqrt3 -> -sqrt3, fixes Q(sqrt2)
sigma_tau = [3, 2, 1, 0, 4, 5]  # fixes Q(sqrt6)
write("qbiquad", {
    "label": "Qbiquad",
    "degree": 4,
    "places": [inf_place(0), inf_place(1), inf_place(2), inf_place(3),
               fin_place(4, 2, 4, 4), fin_place(5, 3, 4, 2)],
    "galois": {"group_order": 4, "generators": [sigma, tau]},
    "subgroups": [
        {"label": "Q(sqrt2,sqrt3)", "generators": []},
        {"label": "Q(sqrt3)", "generators": [sigma]},
        {"label": "Q(sqrt2)", "generators": [tau]},
        {"label": "Q(sqrt6)", "generators": [sigma_tau]},
        {"label": "Q", "generators": [sigma, tau]},
    ],
    "s_unit_basis": [
        vec("1+sqrt2", qb(1, 1, 0, 0)),
        vec("2+sqrt3", qb(2, 0, 1, 0)),
        vec("5+2sqrt6", qb(5, 0, 0, 2)),
        vec("sqrt2", qb(0, 1, 0, 0), {4: "2"}),
        vec("sqrt3", qb(0, 0, 1, 0), {5: "1"}),
    ],
    "prime_generators": {"class_number": 1, "generators": {
        # 1 + (sqrt2 + sqrt6)/2 has norm -2
        "4": vec("1+(sqrt2+sqrt6)/2", qb(2, 1, 0, 1, 2), {4: "1"}),
        "5": vec("sqrt3", qb(0, 0, 1, 0), {5: "1"}),
    }},
    "elements": {
        "one": {"coords": ["0", "0", "0", "0", "0"]},
        "sqrt2": {"coords": ["0", "0", "0", "1", "0"]},
        "sqrt3": {"coords": ["0", "0", "0", "0", "1"]},
        "sqrt6": {"coords": ["0", "0", "0", "1", "1"]},
        "1+sqrt2": {"coords": ["1", "0", "0", "0", "0"], "pisot_salem_house": dec(1 + r2)},
        "2+sqrt3": {"coords": ["0", "1", "0", "0", "0"], "pisot_salem_house": dec(2 + r3)},
        "5+2sqrt6": {"coords": ["0", "0", "1", "0", "0"], "pisot_salem_house": dec(5 + 2 * r2 * r3)},
        "sqrt2+sqrt3": {"coords": ["0", "0", "1/2", "0", "0"]},
        "(1+sqrt2)(2+sqrt3)": {"coords": ["1", "1", "0", "0", "0"],
                               "pisot_salem_house": dec((1 + r2) * (2 + r3))},
        "2": {"coords": ["0", "0", "0", "2", "0"]},
        "3": {"coords": ["0", "0", "0", "0", "2"]},
    },
})
