"""Reference rings, ideals and curves used by the verification suite."""

from dataclasses import dataclass

from src.algebra_core import Polynomial, RingContext
from src.ideals import Ideal
from src.parser import parse_generators, parse_polynomial, parse_ring

PAIR_RANGE = range(8, 13)
HYPERELLIPTIC_RANGE = range(2, 14)

NON_CM_GENERATORS = "m^5, x^4, x*(y^3 + z^3), y*(y^3 + z^3), z*(y^3 + z^3)"
NON_CM_COEFFICIENTS = (76, 48, 4, 1)


@dataclass(frozen=True)
class CorpusIdeal:
    """A named ideal with the dimension of its ring."""

    name: str
    ideal: Ideal

    @property
    def dimension(self) -> int:
        return self.ideal.ring.dimension


def ring(descriptor: str, modulus: str | None = None) -> RingContext:
    """Ring from a descriptor and an optional modulus equation."""
    context = parse_ring(descriptor)
    if modulus is None:
        return context
    return context.with_modulus(parse_polynomial(modulus, context))


def ideal(context: RingContext, generators: str) -> Ideal:
    """Ideal from generator text; ``m^k`` expands to the power of the maximal ideal."""
    return Ideal(tuple(parse_generators(generators, context)), context)


def non_cm_space_ideal() -> Ideal:
    """Ideal of Q[x,y,z] whose last coefficient is 1 while gr is not Cohen-Macaulay."""
    return ideal(ring("Q[x,y,z]"), NON_CM_GENERATORS)


def hyperelliptic_equation(n: int) -> str:
    return f"y^2 - x^{n}"


def hyperelliptic_ring(n: int) -> RingContext:
    """Q[x,y]/(y^2 - x^n)."""
    return ring("Q[x,y]", hyperelliptic_equation(n))


def hyperelliptic_pair_ideal(n: int) -> Ideal:
    """(x^6, x^2*y) in Q[x,y]/(y^2 - x^n): e = (12, 4) for n = 8..12."""
    return ideal(hyperelliptic_ring(n), "x^6, x^2*y")


def jacobian_ideal(n: int) -> Ideal:
    """(y, x^(n-1)), the Jacobian ideal of y^2 - x^n up to units."""
    return ideal(hyperelliptic_ring(n), f"y, x^{n - 1}")


def curve_equation(text: str) -> Polynomial:
    return parse_polynomial(text, parse_ring("Q[x,y]"))


def curve_corpus() -> list[tuple[str, Polynomial]]:
    """Plane curves for the delta cross-check."""
    texts = [hyperelliptic_equation(n) for n in HYPERELLIPTIC_RANGE]
    texts += ["x*y", "y^3 - x^4", "y^2 - x^2 - x^3", "y - x^2"]
    return [(text, curve_equation(text)) for text in texts]


def power_corpus() -> list[CorpusIdeal]:
    """m-primary ideals of dimensions 1, 2 and 3."""
    plane = ring("Q[x,y]")
    space = ring("Q[x,y,z]")
    line = ring("Q[x]")
    node = ring("Q[x,y]", "x*y")
    return [
        CorpusIdeal("(x^2) in Q[x]", ideal(line, "x^2")),
        CorpusIdeal("(x^6, x^2*y) mod y^2 - x^8", hyperelliptic_pair_ideal(8)),
        CorpusIdeal("(y, x^7) mod y^2 - x^8", jacobian_ideal(8)),
        CorpusIdeal("(x, y) mod x*y", ideal(node, "x, y")),
        CorpusIdeal("(x, y) in Q[x,y]", ideal(plane, "x, y")),
        CorpusIdeal("m^2 in Q[x,y]", ideal(plane, "m^2")),
        CorpusIdeal("(x^2, y) in Q[x,y]", ideal(plane, "x^2, y")),
        CorpusIdeal("(x^3, y^2) in Q[x,y]", ideal(plane, "x^3, y^2")),
        CorpusIdeal("(x^2, x*y, y^3) in Q[x,y]", ideal(plane, "x^2, x*y, y^3")),
        CorpusIdeal("(x, y, z) in Q[x,y,z]", ideal(space, "x, y, z")),
        CorpusIdeal("(x, y, z^2) in Q[x,y,z]", ideal(space, "x, y, z^2")),
        CorpusIdeal("m^2 in Q[x,y,z]", ideal(space, "m^2")),
        CorpusIdeal("(x^2, y^2, z^2) in Q[x,y,z]", ideal(space, "x^2, y^2, z^2")),
    ]


def parameter_corpus() -> list[CorpusIdeal]:
    """(x^a, y^b) with a, b <= 4 and m^k with k <= 4 in Q[x,y]."""
    plane = ring("Q[x,y]")
    ideals = [
        CorpusIdeal(f"(x^{a}, y^{b})", ideal(plane, f"x^{a}, y^{b}"))
        for a in range(1, 5)
        for b in range(1, 5)
    ]
    ideals += [CorpusIdeal(f"m^{k}", ideal(plane, f"m^{k}")) for k in range(1, 5)]
    return ideals


def curve_ideal_pairs() -> list[tuple[str, Polynomial, Ideal]]:
    """(curve, m-primary ideal) pairs over the y^2 - x^n family."""
    pairs = []
    for n in PAIR_RANGE:
        equation = hyperelliptic_equation(n)
        f = curve_equation(equation)
        context = hyperelliptic_ring(n)
        for generators in ("x^6, x^2*y", f"y, x^{n - 1}", "x, y", "x^2, y"):
            pairs.append((f"({generators}) mod {equation}", f, ideal(context, generators)))
    return pairs
