# Capacity package
