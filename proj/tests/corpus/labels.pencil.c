/* Label-scoped independence: only l1's conflicts are asserted away. */
void mix(int n, int m, int A[restrict const static n],
         int B[restrict const static n], int t[restrict const static m])
{
  int i;
  #pragma pencil independent (l1)
  for (i = 0; i < m; i++) {
    l1: A[t[i]] += 1;
    B[i] = B[i] + 1;
  }
}
