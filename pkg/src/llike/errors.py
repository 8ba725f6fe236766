"""Exception hierarchy. Every error raised on bad input derives from ``LLikeError``."""


class LLikeError(ValueError):
    pass


class NotCoprime(LLikeError):
    def __init__(self, a: int, b: int):
        self.a, self.b = a, b
        super().__init__(f"NotCoprime({a},{b})")


class ElementTooSmall(LLikeError):
    def __init__(self, value: int):
        self.value = value
        super().__init__(f"ElementTooSmall({value}): generators must be >= 2")


class BadParams(LLikeError):
    pass


class NotInSemigroup(LLikeError):
    pass


class SemigroupOverflow(LLikeError, OverflowError):
    pass


class ArityTooLarge(LLikeError):
    pass


class RangeTooLarge(LLikeError):
    pass


class SetBoundExceeded(LLikeError):
    pass


class DegenerateSpec(LLikeError):
    def __init__(self, i: int, j: int, coeffs, shifts):
        self.pair = (i, j)
        super().__init__(
            f"DegenerateSpec: a[{i}]*h[{j}] == a[{j}]*h[{i}] "
            f"({coeffs[i]}*{shifts[j]} == {coeffs[j]}*{shifts[i]})"
        )
