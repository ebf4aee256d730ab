# Pauli package
