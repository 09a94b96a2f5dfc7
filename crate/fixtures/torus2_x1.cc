# class dx1 on the 2-torus
w 0 2 -1
w 0 8 -1
w 2 3 1
w 3 5 -1
w 5 6 1
w 6 8 -1
