"""Exception types shared across the package."""


class DataError(ValueError):
    """Malformed or invalid input data, optionally tied to a file location."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None and line is not None:
            where = f"{path}:{line}: "
        elif path is not None:
            where = f"{path}: "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)


class DimensionMismatchError(DataError):
    pass


class DegenerateCorpusError(ValueError):
    """The corpus admits no meaningful baseline (e.g. SS_tot == 0)."""


class ZeroProbabilityError(ValueError):
    """A model assigns zero probability to an observed token."""

    def __init__(self, doc, term, doc_id=None, term_label=None):
        self.doc = doc
        self.term = term
        label = f"document {doc}" + (f" ({doc_id!r})" if doc_id is not None else "")
        label += f", term {term}" + (f" ({term_label!r})" if term_label is not None else "")
        super().__init__(f"model assigns zero probability to an observed token at {label}")
