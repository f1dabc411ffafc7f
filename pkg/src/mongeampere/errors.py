class DomainError(ValueError):
    """Mathematically invalid input: wrong degree, degenerate form, unsolvable system."""


class ParseError(ValueError):
    """Syntax or naming error in the form/polynomial mini-language."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")
