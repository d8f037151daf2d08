"""One constraint projector, two ensembles.

A quantum system is embedded in a clock (x) system space where a single
constraint (clock momentum + Hamiltonian) selects physical states.  The
regularized delta projector of that constraint, contracted against clock
position states, gives the thermal kernel and the partition function;
contracted against clock momentum states, it gives the broadened spectral
shell and the density of states.  The classical side of the same story is
a parametrized action whose fixed-time gauge is Hamilton's principle and
whose fixed-energy boundary problem is solved by shooting.
"""

__version__ = "0.1.0"
