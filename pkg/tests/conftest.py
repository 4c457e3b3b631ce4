"""Test-session setup.

Thread caps are set before numpy loads so floating-point reductions are
stable run-to-run (the bit-reproducibility contract assumes a fixed BLAS
thread configuration).
"""

import os

os.environ.setdefault("OPENBLAS_NUM_THREADS", "2")
os.environ.setdefault("OMP_NUM_THREADS", "2")
os.environ.setdefault("MKL_NUM_THREADS", "2")
