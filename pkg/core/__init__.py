# Core utilities package
