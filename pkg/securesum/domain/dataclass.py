import attr


def dataclass(cls=None, *, frozen: bool = False):
    """
    Decorator for quickly defining data classes.

    Really just a wrapper around `attr.s`, an alternative to the std libs dataclasses.
    Value types that are shared between threads (field elements, matrices, schemes)
    pass `frozen=True`.
    """

    def wrap(cls):
        if not attr.has(cls):
            cls = attr.s(auto_attribs=True, slots=True, frozen=frozen)(cls)
        return cls

    if cls is None:
        return wrap
    return wrap(cls)
