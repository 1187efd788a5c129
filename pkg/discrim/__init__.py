"""
The ``discrim`` package verifies, by computation, the value of the
discriminator of :math:`f(x) = x^3 + x`: the smallest modulus `m` for which
:math:`f(1), \\dots, f(n)` are pairwise distinct modulo `m`. It equals
:math:`3^{\\lceil \\log_3 n \\rceil}` except when :math:`n = 3^{6s+5}+1` or
:math:`n = 3^{6s+5}+2`, where it is :math:`7 \\cdot 3^{6s+4}`. `delta_bruteforce`
and `delta_closed_form` compute the value both ways and `verify_range`
compares them over a range of `n`. The case analysis behind the closed form
is executable through `classify` and `construct_collision`, the character
sums it relies on are evaluated exactly in the `charsum` module, and
`verify_suite` runs each of the proof's numeric checks as a resumable sweep.
As in the kernels themselves, `numba=True` selects the `Numba` compiled path
and `numba=False` the pure `Python` oracle, and sweeps run in parallel
through the `joblib` library. `records_out` exports any record log as a
`Pandas` DataFrame.
"""

from discrim.discriminator import (
    CollisionWitness,
    DiscriminatorResult,
    InjectivityBuffer,
    delta_bruteforce,
    delta_closed_form,
    exceptional_s,
    find_collision,
    is_injective,
    verify_range,
    verify_witness,
)
from discrim.casework import (
    Case,
    CaseTag,
    CountingRecord,
    classify,
    compute_Tj,
    construct_collision,
    count_N,
    count_N_star,
    decomposition,
    ell7_pattern,
    exceptional_no_collision,
    n_lower_bound,
    verify_inequality,
    verify_partition,
)
from discrim.records import VerificationRecord, RecordSink, emit, load_records, records_out
from discrim.suites import SUITES, conforms, verify_suite

__all__ = [s for s in dir() if not s.startswith("_")]

__version__ = "0.1.0"
__author__ = "draktr"
