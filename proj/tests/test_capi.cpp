#include "pexfem/pexfem.h"
int main() { return 0; }
