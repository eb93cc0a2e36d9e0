"""Fountain coding with a multiplicatively repeated non-binary LDPC pre-code.

Subpackages:

* :mod:`nbfountain.gf` -- GF(2^m) arithmetic.
* :mod:`nbfountain.precode` -- the (2,d_c)-regular pre-code over GF(2^m).
* :mod:`nbfountain.fountain` -- the endless multiplicative-repetition stream.
* :mod:`nbfountain.channel` -- BEC / BI-AWGN models, posteriors, capacity.
* :mod:`nbfountain.spdecoder` -- sum-product decoding on the pre-code graph.
* :mod:`nbfountain.deanalysis` -- BEC density evolution and overhead thresholds.
* :mod:`nbfountain.harness` -- Monte-Carlo experiment engine.
* :mod:`nbfountain.cli` -- command-line interface.
"""

__version__ = "0.1.0"
