# app/exceptions.py


class GuessworkError(ValueError):
    """Базова помилка сервісу; роутери перетворюють її на 400."""


class DistributionError(GuessworkError):
    pass


class CapExceededError(GuessworkError):
    def __init__(self, cap_name: str, cap: int, required: int, hint: str = ""):
        self.cap_name = cap_name
        self.cap = cap
        self.required = required
        message = f"{cap_name} exceeded: required {required}, cap {cap}"
        if hint:
            message = f"{message} ({hint})"
        super().__init__(message)


class InfeasibleError(GuessworkError):
    pass


class OptimizerDisagreementError(GuessworkError):
    def __init__(self, name: str, closed_form: float, optimized: float):
        self.closed_form = closed_form
        self.optimized = optimized
        super().__init__(
            f"{name}: closed form {closed_form!r} and optimizer {optimized!r} disagree"
        )


class ResolutionError(GuessworkError):
    def __init__(self, spacing: float):
        self.spacing = spacing
        super().__init__(f"resolution too coarse to bracket the optimum: grid spacing {spacing}")


class CorpusError(GuessworkError):
    pass
