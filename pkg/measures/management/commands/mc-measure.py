"""``mc-measure``: the same command as ``mc_measure``."""
from measures.management.commands.mc_measure import Command  # noqa: F401
