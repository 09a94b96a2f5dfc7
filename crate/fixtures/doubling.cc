# projection to the base circle
w 0 15 1
w 0 17 1
w 1 15 1
w 1 16 1
w 2 16 1
w 2 17 1
