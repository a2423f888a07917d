void shift(int n, int B[restrict const static n])
{
  int i;
  for (i = 1; i < n; i++) {
    B[i] = B[i - 1];
  }
}
