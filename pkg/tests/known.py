"""Polynomials and polygons shared by the test modules."""

from zmut.lattice import LatticePolygon
from zmut.laurent import parse

TRIANGLE = LatticePolygon(((0, 0), (3, 0), (3, 2)))
QUAD = LatticePolygon(((-1, -1), (2, -1), (1, 1), (-1, 2)))

G_TEXT = "((1+x)^3 + (1+y)^3 - 1 + x^2*y^2)/(x*y)"
ALPHA_TEXT = "((1+x+2*y+y^2)*(1+2*x+x^2+y))/(x*y)"
BETA_TEXT = "((1+x)^3 + 3*y*(1+x)^2 + y^2*(1+x)*(3+x) + y^3)/(x*y)"
GAMMA_TEXT = "((1+y)^3 + 3*x*(1+y)^2 + x^2*(1+y)*(3+y) + x^3)/(x*y)"
F1_TEXT = "(1+x)^3 + 2*(1+x)*x^2*y + x^3*y^2"
F2_TEXT = "(1+y)^2*x^3 + 3*(1+y)*x^2 + 3*x + 1"

G = parse(G_TEXT)
ALPHA = parse(ALPHA_TEXT)
BETA = parse(BETA_TEXT)
GAMMA = parse(GAMMA_TEXT)
ALPHA_FACTORS = (parse("1+x+2*y+y^2"), parse("1+2*x+x^2+y"))
OFF_LIST = G + parse("5+3*x+3*y")
F1 = parse(F1_TEXT)
F2 = parse(F2_TEXT)

# characters -u, -m1_{2,1}, -m1_{3,1}, -m1_{3,2}, -m2_{2,1}, -m2_{3,1}, -m2_{3,2}
COLUMNS = [(0, 0, -1), (0, 1, -1), (0, 1, -2), (0, 2, -1), (1, 0, -1), (1, 0, -2), (2, 0, -1)]
