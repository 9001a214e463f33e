"""ncgv: exact and numeric verification of commutator representations of
covariant first-order differential calculi on quantum groups and quantum
spaces."""

__version__ = "0.1.0"
