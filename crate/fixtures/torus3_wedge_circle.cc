# class carried by the circle summand
w 0 27 1
