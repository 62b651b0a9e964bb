"""Finite implicative algebras, their triposes and categories of assemblies."""
