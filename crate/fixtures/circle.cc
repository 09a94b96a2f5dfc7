# generator of H^1 of the hollow triangle
w 0 1 1
