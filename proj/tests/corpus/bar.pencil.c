/* Non-compliant declarations: array-of-pointers parameter and a local
   pointer. */
void bar(int *(d[4]))
{
  int *e;
}
