"""Büchi and coBüchi automata toolkit: history-determinism checks, canonical forms and SAT-based separators."""

from .automaton import Alphabet, Automaton, Lasso, Transition
from .zoo import zoo

__version__ = "0.1.0"
__all__ = ["Alphabet", "Automaton", "Lasso", "Transition", "zoo", "__version__"]
