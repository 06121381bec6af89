# flake8: noqa
from wermerset.utils.algebra.uni_poly import UniPoly, trim_coefficients
from wermerset.utils.algebra.bi_poly import BiPoly, poly_eval
from wermerset.utils.algebra.root_set import RootSet
from wermerset.utils.algebra.root_finding import batch_roots, uni_roots
from wermerset.utils.algebra.operations import (
    shift_product,
    roots_in_w,
    fibre_roots,
    discriminant_in_w,
    sylvester_matrices,
    bareiss_determinant,
)
