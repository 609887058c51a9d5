"""States, time evolution and coupled systems."""
