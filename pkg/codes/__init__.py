"""
Generalized Reed-Solomon codes over quadratic towers GF(q²), their Hermitian
hulls, the propagation rules that grow or shrink a hull, and the MDS
entanglement-assisted quantum code parameters they yield.

Field elements are galois ``FieldArray`` values; on disk they are integer
representatives (little-endian base-p digits).
"""
