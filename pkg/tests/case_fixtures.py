"""Small embedded complexes reproducing the incidence patterns of the four
elementary derivative cases (skew pair, shared face, three and four
tetrahedra around an edge)."""

import numpy as np

from lensinv.defect import complex_from_points
from lensinv.tetgeom import oriented_volume

NAMES = "ABCDEF"
POINTS = {
    "A": np.array([1.0, 0.0, 0.1]),
    "B": np.array([-0.5, 0.9, -0.1]),
    "C": np.array([-0.45, -0.85, 0.05]),
    "D": np.array([0.1, 0.05, 1.1]),
    "E": np.array([-0.05, 0.1, -0.9]),
    "F": np.array([0.6, -0.9, -0.05]),
}
# ring A, B, C, F around DE for the four-tetrahedron star
RING4 = {
    "A": np.array([1.0, 0.1, 0.1]),
    "B": np.array([-0.1, 1.05, -0.1]),
    "C": np.array([-0.95, -0.05, 0.05]),
    "F": np.array([0.05, -1.1, -0.08]),
    "D": np.array([0.1, 0.05, 1.1]),
    "E": np.array([-0.05, 0.1, -0.9]),
}


def V(points, word):
    return oriented_volume(*(points[ch] for ch in word))


def length(points, word):
    return float(np.linalg.norm(points[word[0]] - points[word[1]]))


def build(points, words):
    names = sorted(points)
    pts = [points[n] for n in names]
    tets = [[names.index(ch) for ch in w] for w in words]
    cx, metric = complex_from_points(pts, tets, names)

    def edge(word):
        key = "".join(sorted(word))
        return cx.edge_index(key)

    return cx, metric, edge


def three_star(points=POINTS):
    return build(points, ["ABED", "BCED", "CAED"])


def shared_face(points=POINTS):
    return build(points, ["ABCD", "EABC"])


def four_star(points=RING4):
    return build(points, ["ABED", "BCED", "CFED", "FAED"])


def case1_expected(points=POINTS):
    return -length(points, "AB") * length(points, "DE") / 6 / V(points, "ABED")


def case2_expected(points=POINTS):
    return (length(points, "AB") * length(points, "AC") / 6
            * V(points, "BCED") / (V(points, "ABCD") * V(points, "EABC")))


def case3_expected(points=POINTS):
    return (-length(points, "DE") ** 2 / 6
            * V(points, "ABCD") * V(points, "EABC")
            / (V(points, "ABED") * V(points, "BCED") * V(points, "CAED")))


def case4_expected(points=RING4):
    return -length(points, "DE") ** 2 / 6 * (
        V(points, "ABCD") * V(points, "EABC")
        / (V(points, "ABED") * V(points, "BCED") * V(points, "CAED"))
        + V(points, "ACFD") * V(points, "EACF")
        / (V(points, "ACED") * V(points, "CFED") * V(points, "FAED"))
    )
