# Make tests a package
