"""
Shared constants for the core application.

Used across multiple apps (automata, stallings, measures, growth, oracle).
"""

# Word text syntax
IDENTITY_TOKENS = ("", "1")
MAX_LETTER_RANK = 26  # above this, generators are written x1, x2, ... / X1, X2, ...
INDEXED_GENERATOR_PREFIX = "x"
INDEXED_INVERSE_PREFIX = "X"

# Variable tags carried by rational functions
VAR_T = "t"  # adjusted measure / counting variable
VAR_S = "s"  # stopping probability
VAR_Z = "z"  # z = 1 - s, frequency series
VAR_X = "x"  # characteristic polynomials

VARIABLE_TAGS = (VAR_T, VAR_S, VAR_Z, VAR_X)

# Command exit codes
EXIT_INPUT_ERROR = 1
EXIT_RESOURCE_ERROR = 2
EXIT_INTERNAL_ERROR = 3

# Output formats
FORMAT_TEXT = "text"
FORMAT_JSON = "json"

FORMAT_CHOICES = [FORMAT_TEXT, FORMAT_JSON]
