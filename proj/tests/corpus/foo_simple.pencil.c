/* Compliant: VLA parameter with all three qualifiers. */
void foo(int a[restrict const static 5])
{
  /* `a' is const but its elements are not. */
  a[0] = 1;

  /* Locals are not coerced to pointers, so const is not required. */
  int c[2];
}
