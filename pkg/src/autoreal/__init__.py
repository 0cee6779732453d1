"""Automata-based exact real computation on [0,1].

Buchi graph automata of continuous functions, nondeterministic binary
transducers, deterministic signed-binary transducers, and the exact
rational oracles that verify every construction.
"""

__version__ = "0.1.0"
