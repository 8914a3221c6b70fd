"""equimap: exact-arithmetic construction and certification of equivariant
polynomial self-maps of finite matrix groups, plus brute-force group
invariants and symbolic path families of polynomial automorphisms."""

from ._kernel import KERNEL_NAME as kernel_name

__version__ = "0.1.0"
__all__ = ["kernel_name", "__version__"]
