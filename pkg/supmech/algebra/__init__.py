"""Matrix, polynomial and tensor-product algebras."""
