# Gaussian package
